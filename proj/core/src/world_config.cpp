#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "posetta/error.hpp"
#include "posetta/synthworld.hpp"

namespace posetta::synth {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || end != value.data() + value.size()) {
    throw Error(Errc::InvalidConfig,
                "bad value '" + std::string(value) + "' for '" + std::string(key) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(Errc::InvalidConfig,
              "bad boolean '" + std::string(value) + "' for '" + std::string(key) + "'");
}

}  // namespace

void SyntheticWorldConfig::validate() const {
  const auto fail = [](const std::string& msg) { throw Error(Errc::InvalidConfig, msg); };
  if (dim < 8) fail("dim must be >= 8");
  if (n_identities < 2) fail("n_identities must be >= 2");
  if (samples_per_identity < 2) fail("samples_per_identity must be >= 2");
  if (pair_count_same + pair_count_diff == 0) fail("world needs at least one pair");
  for (auto [name, v] : {std::pair{"pose_range_deg", pose_range_deg},
                         std::pair{"pose_min_deg", pose_min_deg},
                         std::pair{"pose_noise_scale", pose_noise_scale},
                         std::pair{"animator_bias_scale", animator_bias_scale},
                         std::pair{"obs_noise_scale", obs_noise_scale},
                         std::pair{"flip_penalty_scale", flip_penalty_scale}}) {
    if (!std::isfinite(v) || v < 0.0) fail(std::string(name) + " must be finite and >= 0");
  }
  if (pose_min_deg > pose_range_deg) fail("pose_min_deg must not exceed pose_range_deg");
  if (pose_range_deg > 180.0) fail("pose_range_deg must be <= 180");
  if (!(animator_fidelity >= 0.0 && animator_fidelity <= 1.0)) {
    fail("animator_fidelity must lie in [0, 1]");
  }
  if (!(noise_image_correlation >= 0.0 && noise_image_correlation <= 1.0)) {
    fail("noise_image_correlation must lie in [0, 1]");
  }
}

std::vector<std::pair<std::string, std::string>> SyntheticWorldConfig::to_key_values() const {
  return {
      {"n_identities", std::to_string(n_identities)},
      {"samples_per_identity", std::to_string(samples_per_identity)},
      {"dim", std::to_string(dim)},
      {"seed", std::to_string(seed)},
      {"pose_range_deg", fmt(pose_range_deg)},
      {"pose_min_deg", fmt(pose_min_deg)},
      {"pose_noise_scale", fmt(pose_noise_scale)},
      {"animator_fidelity", fmt(animator_fidelity)},
      {"animator_bias_scale", fmt(animator_bias_scale)},
      {"obs_noise_scale", fmt(obs_noise_scale)},
      {"noise_image_correlation", fmt(noise_image_correlation)},
      {"flip_penalty_scale", fmt(flip_penalty_scale)},
      {"pair_count_same", std::to_string(pair_count_same)},
      {"pair_count_diff", std::to_string(pair_count_diff)},
      {"yaw_signs", yaw_signs == YawSigns::Mixed ? "mixed" : "positive"},
      {"honor_flip", honor_flip ? "true" : "false"},
  };
}

void SyntheticWorldConfig::apply(std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "n_identities") {
    n_identities = parse_number<std::size_t>(key, value);
  } else if (key == "samples_per_identity") {
    samples_per_identity = parse_number<std::size_t>(key, value);
  } else if (key == "dim") {
    dim = parse_number<std::size_t>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "pose_range_deg") {
    pose_range_deg = parse_number<double>(key, value);
  } else if (key == "pose_min_deg") {
    pose_min_deg = parse_number<double>(key, value);
  } else if (key == "pose_noise_scale") {
    pose_noise_scale = parse_number<double>(key, value);
  } else if (key == "animator_fidelity") {
    animator_fidelity = parse_number<double>(key, value);
  } else if (key == "animator_bias_scale") {
    animator_bias_scale = parse_number<double>(key, value);
  } else if (key == "obs_noise_scale") {
    obs_noise_scale = parse_number<double>(key, value);
  } else if (key == "noise_image_correlation") {
    noise_image_correlation = parse_number<double>(key, value);
  } else if (key == "flip_penalty_scale") {
    flip_penalty_scale = parse_number<double>(key, value);
  } else if (key == "pair_count_same") {
    pair_count_same = parse_number<std::size_t>(key, value);
  } else if (key == "pair_count_diff") {
    pair_count_diff = parse_number<std::size_t>(key, value);
  } else if (key == "yaw_signs") {
    if (value == "mixed") {
      yaw_signs = YawSigns::Mixed;
    } else if (value == "positive") {
      yaw_signs = YawSigns::Positive;
    } else {
      throw Error(Errc::InvalidConfig, "yaw_signs must be 'mixed' or 'positive'");
    }
  } else if (key == "honor_flip") {
    honor_flip = parse_bool(key, value);
  } else {
    throw Error(Errc::InvalidConfig, "unknown world config key '" + std::string(key) + "'");
  }
}

SyntheticWorldConfig parse_world_config(const std::string& text, SyntheticWorldConfig base) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    base.apply(line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

SyntheticWorldConfig load_world_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoFailure, "cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_world_config(ss.str());
}

void apply_overrides(SyntheticWorldConfig& cfg, std::span<const std::string> overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidConfig, "override '" + o + "' is not key=value");
    }
    cfg.apply(std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1));
  }
}

}  // namespace posetta::synth
