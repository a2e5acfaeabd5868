#include "posetta/manifest.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "posetta/error.hpp"

namespace posetta {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint32_t to_le(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    v = ((v & 0xFFu) << 24) | ((v & 0xFF00u) << 8) | ((v >> 8) & 0xFF00u) | (v >> 24);
  }
  return v;
}

void put_u32(std::string& out, std::uint32_t v) {
  v = to_le(v);
  char buf[4];
  std::memcpy(buf, &v, 4);
  out.append(buf, 4);
}

std::uint32_t get_u32(const char* p) {
  std::uint32_t v;
  std::memcpy(&v, p, 4);
  return to_le(v);
}

std::string read_file(const std::filesystem::path& path, Errc missing_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(missing_code, "cannot open '" + path.string() + "'");
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::IoFailure, "read failed for '" + path.string() + "'");
  return data;
}

struct RawRep {
  Transform transform;
  std::size_t offset;
};

const ordered_json& require(const ordered_json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::SchemaViolation,
                "line " + std::to_string(line_no) + ": missing key '" + key + "'");
  }
  return *it;
}

double parse_yaw(const ordered_json& v, std::size_t line_no) {
  if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (!v.is_number()) {
    throw Error(Errc::SchemaViolation, "line " + std::to_string(line_no) + ": yaw_deg not numeric");
  }
  return v.get<double>();
}

}  // namespace

std::filesystem::path blob_path_for(const std::filesystem::path& index_path) {
  auto p = index_path;
  p.replace_extension(".bin");
  return p;
}

bool normalize_embedding(std::span<float> values) {
  double acc = 0.0;
  for (float v : values) acc += static_cast<double>(v) * static_cast<double>(v);
  const double norm = std::sqrt(acc);
  if (norm < kZeroNormThreshold) throw Error(Errc::ZeroVector, "embedding norm below 1e-12");
  if (std::abs(norm - 1.0) <= kRenormTolerance) return false;
  for (float& v : values) v = static_cast<float>(static_cast<double>(v) / norm);
  return true;
}

Manifest load_manifest(const std::filesystem::path& index_path) {
  const std::string index = read_file(index_path, Errc::IoFailure);
  const auto blob_path = blob_path_for(index_path);
  if (!std::filesystem::exists(blob_path)) {
    throw Error(Errc::MissingBlob, "blob '" + blob_path.string() + "' not found");
  }
  const std::string blob = read_file(blob_path, Errc::MissingBlob);

  Manifest m;
  std::vector<std::vector<RawRep>> raw_reps;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < index.size()) {
    std::size_t end = index.find('\n', pos);
    if (end == std::string::npos) end = index.size();
    std::string_view line(index.data() + pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::SchemaViolation, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!obj.is_object()) {
      throw Error(Errc::SchemaViolation, "line " + std::to_string(line_no) + ": not an object");
    }

    try {
      if (!have_header) {
        if (require(obj, "version", line_no).get<int>() != static_cast<int>(kFormatVersion)) {
          throw Error(Errc::SchemaViolation, "unsupported manifest version");
        }
        const auto dim = require(obj, "dim", line_no).get<long long>();
        if (dim < 1) throw Error(Errc::DimMismatch, "header dim must be >= 1");
        m.dim = static_cast<std::size_t>(dim);
        if (auto it = obj.find("metadata"); it != obj.end()) {
          for (const auto& [k, v] : it->items()) {
            m.metadata[k] = v.is_string() ? v.get<std::string>() : v.dump();
          }
        }
        have_header = true;
        continue;
      }

      if (obj.contains("pair")) {
        const auto& ids = obj.at("pair");
        if (!ids.is_array() || ids.size() != 2) {
          throw Error(Errc::SchemaViolation,
                      "line " + std::to_string(line_no) + ": 'pair' must hold two ids");
        }
        m.pairs.push_back(PairRecord{ids[0].get<std::string>(), ids[1].get<std::string>(),
                                     require(obj, "same", line_no).get<bool>()});
        continue;
      }

      FaceSample s;
      s.sample_id = require(obj, "sample_id", line_no).get<std::string>();
      s.identity_id = require(obj, "identity_id", line_no).get<std::string>();
      s.yaw_deg = parse_yaw(require(obj, "yaw_deg", line_no), line_no);
      std::vector<RawRep> reps;
      for (const auto& r : require(obj, "reps", line_no)) {
        const Transform t = parse_transform(require(r, "transform", line_no).get<std::string>());
        const Provenance p = parse_provenance(require(r, "provenance", line_no).get<std::string>());
        if (p != provenance_of(t)) {
          throw Error(Errc::SchemaViolation, "sample '" + s.sample_id + "': " +
                                                 std::string(to_string(t)) + " must be " +
                                                 std::string(to_string(provenance_of(t))));
        }
        const auto offset = require(r, "offset", line_no).get<long long>();
        if (offset < 0) throw Error(Errc::SchemaViolation, "negative offset");
        for (const auto& prev : reps) {
          if (prev.transform == t) {
            throw Error(Errc::SchemaViolation, "sample '" + s.sample_id + "' repeats transform " +
                                                   std::string(to_string(t)));
          }
        }
        reps.push_back({t, static_cast<std::size_t>(offset)});
      }
      m.samples.push_back(std::move(s));
      raw_reps.push_back(std::move(reps));
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::SchemaViolation, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw Error(Errc::SchemaViolation, "index has no header line");

  if (blob.size() < kBlobHeaderBytes || std::memcmp(blob.data(), kBlobMagic, 4) != 0) {
    throw Error(Errc::SchemaViolation, "blob magic mismatch");
  }
  if (get_u32(blob.data() + 4) != kFormatVersion) {
    throw Error(Errc::SchemaViolation, "unsupported blob version");
  }
  if (get_u32(blob.data() + 8) != m.dim) {
    throw Error(Errc::DimMismatch, "blob dim " + std::to_string(get_u32(blob.data() + 8)) +
                                       " differs from header dim " + std::to_string(m.dim));
  }
  const std::size_t stride = m.dim * sizeof(float);
  if ((blob.size() - kBlobHeaderBytes) % stride != 0) {
    throw Error(Errc::DimMismatch, "blob payload is not a whole number of dim-" +
                                       std::to_string(m.dim) + " vectors");
  }
  const std::size_t n_vectors = (blob.size() - kBlobHeaderBytes) / stride;

  std::size_t renormalized = 0;
  for (std::size_t i = 0; i < m.samples.size(); ++i) {
    auto& s = m.samples[i];
    for (const auto& r : raw_reps[i]) {
      if (r.offset >= n_vectors) {
        throw Error(Errc::SchemaViolation, "sample '" + s.sample_id + "' offset " +
                                               std::to_string(r.offset) + " beyond blob end");
      }
      std::vector<float> values(m.dim);
      const char* src = blob.data() + kBlobHeaderBytes + r.offset * stride;
      for (std::size_t c = 0; c < m.dim; ++c) {
        values[c] = std::bit_cast<float>(get_u32(src + c * sizeof(float)));
      }
      try {
        if (normalize_embedding(values)) ++renormalized;
      } catch (const Error&) {
        throw Error(Errc::ZeroVector, "sample '" + s.sample_id + "' " +
                                          std::string(to_string(r.transform)) +
                                          " has zero norm");
      }
      s.representations.emplace(r.transform, EmbeddingVector(std::move(values)));
    }
  }
  m.metadata[kRenormalizedKey] = std::to_string(renormalized);

  validate(m);
  m.reindex();
  return m;
}

void save_manifest(const Manifest& m, const std::filesystem::path& index_path) {
  validate(m);

  std::string blob;
  blob.reserve(kBlobHeaderBytes + m.vector_count() * m.dim * sizeof(float));
  blob.append(kBlobMagic, 4);
  put_u32(blob, kFormatVersion);
  put_u32(blob, static_cast<std::uint32_t>(m.dim));

  std::string index;
  ordered_json header;
  header["version"] = kFormatVersion;
  header["dim"] = m.dim;
  header["metadata"] = ordered_json::object();
  for (const auto& [k, v] : m.metadata) header["metadata"][k] = v;
  index += header.dump() + '\n';

  std::size_t offset = 0;
  for (const auto& s : m.samples) {
    ordered_json line;
    line["sample_id"] = s.sample_id;
    line["identity_id"] = s.identity_id;
    if (std::isnan(s.yaw_deg)) {
      line["yaw_deg"] = nullptr;
    } else {
      line["yaw_deg"] = s.yaw_deg;
    }
    line["reps"] = ordered_json::array();
    for (const auto& [t, v] : s.representations) {
      ordered_json rep;
      rep["transform"] = to_string(t);
      rep["provenance"] = to_string(provenance_of(t));
      rep["offset"] = offset++;
      line["reps"].push_back(std::move(rep));
      for (float x : v.values()) put_u32(blob, std::bit_cast<std::uint32_t>(x));
    }
    index += line.dump() + '\n';
  }
  for (const auto& p : m.pairs) {
    ordered_json line;
    line["pair"] = {p.left, p.right};
    line["same"] = p.is_same;
    index += line.dump() + '\n';
  }

  const auto write = [](const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoFailure, "cannot open '" + path.string() + "' for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw Error(Errc::IoFailure, "write failed for '" + path.string() + "'");
  };
  write(blob_path_for(index_path), blob);
  write(index_path, index);
}

}  // namespace posetta
