#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace qcs {

// Binary prefix code over symbol indices 0..M-1.
struct PrefixCode {
  std::vector<std::string> codewords;  // '0'/'1' strings, index-aligned

  std::size_t size() const { return codewords.size(); }
  std::vector<int> lengths() const;
  double kraft_sum() const;       // Σ 2^{-ℓ_i}
  bool is_prefix_free() const;
};

// Optimal prefix code by the two-smallest-merge construction. Ties merge the
// lowest-index nodes first and the first-popped node takes bit 0, so the code
// is deterministic. A single-symbol alphabet gets the one-bit codeword "0".
PrefixCode huffman(std::span<const double> probs);

double expected_length(const PrefixCode& code, std::span<const double> probs);
double entropy(std::span<const double> probs);  // bits, with 0·log 0 = 0

}  // namespace qcs
