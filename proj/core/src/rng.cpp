#include "posetta/rng.hpp"

#include <cmath>
#include <numbers>

namespace posetta {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

CounterRng::CounterRng(std::uint64_t seed, std::string_view purpose,
                       std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t k = mix64(seed ^ kGolden) ^ mix64(fnv1a64(purpose));
  for (std::uint64_t idx : indices) k = mix64(k ^ (idx + kGolden));
  key_ = k;
}

std::uint64_t CounterRng::next_u64() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  // rejection sampling
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

}  // namespace posetta
