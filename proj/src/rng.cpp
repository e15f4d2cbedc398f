#include "qcs/rng.hpp"

#include <cmath>
#include <numbers>

namespace qcs {

namespace {

constexpr std::uint64_t kWeyl = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

}  // namespace

CounterRng CounterRng::derive(std::uint64_t master_seed, std::uint64_t stream) {
  return CounterRng(derive_key(master_seed, stream));
}

std::uint64_t CounterRng::derive_key(std::uint64_t master_seed, std::uint64_t stream) {
  return mix64(master_seed + kWeyl * mix64(stream + 1));
}

std::uint64_t CounterRng::next_u64() { return mix64(key_ + kWeyl * ++counter_); }

double CounterRng::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_double_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = next_double_pos();
  const double u2 = next_double();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::uint64_t CounterRng::next_below(std::uint64_t n) {
  // Lemire's unbiased bounded generation.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t t = -n % n;
    while (lo < t) {
      m = static_cast<unsigned __int128>(next_u64()) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace qcs
