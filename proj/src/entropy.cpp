#include "qcs/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace qcs {

std::vector<int> PrefixCode::lengths() const {
  std::vector<int> out(codewords.size());
  for (std::size_t i = 0; i < codewords.size(); ++i) out[i] = static_cast<int>(codewords[i].size());
  return out;
}

double PrefixCode::kraft_sum() const {
  double sum = 0.0;
  for (const auto& w : codewords) sum += std::ldexp(1.0, -static_cast<int>(w.size()));
  return sum;
}

bool PrefixCode::is_prefix_free() const {
  std::vector<std::string> sorted = codewords;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
    if (sorted[i + 1].compare(0, sorted[i].size(), sorted[i]) == 0) return false;
  return true;
}

namespace {

void validate_probs(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("probability vector is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be nonnegative");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
}

struct Node {
  double prob;
  int left = -1;   // first-popped child, bit 0
  int right = -1;  // second-popped child, bit 1
};

}  // namespace

PrefixCode huffman(std::span<const double> probs) {
  validate_probs(probs);
  const auto m = probs.size();
  PrefixCode code;
  code.codewords.resize(m);
  if (m == 1) {
    code.codewords[0] = "0";
    return code;
  }

  std::vector<Node> nodes;
  nodes.reserve(2 * m);
  using Entry = std::pair<double, int>;  // (prob, creation index): ties pop lowest index
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < m; ++i) {
    nodes.push_back({probs[i]});
    heap.emplace(probs[i], static_cast<int>(i));
  }
  while (heap.size() > 1) {
    const auto [pa, a] = heap.top();
    heap.pop();
    const auto [pb, b] = heap.top();
    heap.pop();
    nodes.push_back({pa + pb, a, b});
    heap.emplace(pa + pb, static_cast<int>(nodes.size()) - 1);
  }
  const int root = heap.top().second;

  // Iterative depth-first code assignment.
  std::vector<std::pair<int, std::string>> stack;
  stack.emplace_back(root, "");
  while (!stack.empty()) {
    auto [id, word] = std::move(stack.back());
    stack.pop_back();
    const Node& node = nodes[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      code.codewords[static_cast<std::size_t>(id)] = std::move(word);
      continue;
    }
    stack.emplace_back(node.left, word + "0");
    stack.emplace_back(node.right, word + "1");
  }
  return code;
}

double expected_length(const PrefixCode& code, std::span<const double> probs) {
  if (code.size() != probs.size()) throw std::invalid_argument("code/probability size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i)
    sum += probs[i] * static_cast<double>(code.codewords[i].size());
  return sum;
}

double entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

}  // namespace qcs
