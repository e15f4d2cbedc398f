#pragma once

#include <cstdint>

namespace qcs {

// Counter-based keyed generator: every output is a pure function of
// (key, counter), so stream i can be derived from (master_seed, i) without
// any sequential dependence between streams. Gaussian deviates come from
// Box-Muller on the counter stream.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  // Generator for stream `stream` under `master_seed`.
  static CounterRng derive(std::uint64_t master_seed, std::uint64_t stream);
  // Key of that generator, for APIs that take a plain seed.
  static std::uint64_t derive_key(std::uint64_t master_seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double next_double();           // uniform on [0, 1)
  double next_double_pos();       // uniform on (0, 1]
  double next_gaussian();         // standard normal
  std::uint64_t next_below(std::uint64_t n);  // uniform on {0, ..., n-1}

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qcs
