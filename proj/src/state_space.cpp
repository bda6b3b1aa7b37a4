#include "sparsebfs/state_space.hpp"

#include <algorithm>
#include <stdexcept>

namespace sparsebfs {
namespace {

bool strictly_increasing_in_range(const Support& s, int d) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= d) return false;
    if (i > 0 && s[i] <= s[i - 1]) return false;
  }
  return true;
}

}  // namespace

bool is_node(const Support& indices, int d, int k) {
  if (!strictly_increasing_in_range(indices, d)) return false;
  const int size = static_cast<int>(indices.size());
  const int frontier = indices.empty() ? 0 : indices.back() + 1;
  return size <= k && k - size <= d - frontier;
}

Node::Node(Support indices, int d, int k) : indices_(std::move(indices)), d_(d), k_(k) {
  if (k < 0 || k > d) throw std::invalid_argument("Node: need 0 <= k <= d");
  if (!is_node(indices_, d, k)) throw std::invalid_argument("Node: " + to_string() + " is not in the tree");
}

Node Node::parent() const {
  if (indices_.empty()) throw std::logic_error("Node::parent: root has no parent");
  Support p(indices_.begin(), indices_.end() - 1);
  return Node(std::move(p), d_, k_);
}

std::vector<Node> Node::children() const {
  std::vector<Node> out;
  if (is_leaf()) return out;
  // T = S ∪ {m} needs k − |S| − 1 ≤ d − (m + 1).
  const int last = d_ - (k_ - size());
  for (int m = frontier(); m <= last; ++m) {
    Support t = indices_;
    t.push_back(m);
    out.emplace_back(std::move(t), d_, k_);
  }
  return out;
}

bool Node::contains(int i) const { return std::binary_search(indices_.begin(), indices_.end(), i); }

bool Node::covers_support(const Support& target) const {
  if (static_cast<int>(target.size()) > k_)
    throw std::invalid_argument("Node::covers_support: target larger than k");
  int extra = 0;
  for (int t : target) {
    if (t < frontier()) {
      if (!contains(t)) return false;
    } else {
      ++extra;
    }
  }
  return size() + extra <= k_;
}

std::string Node::to_string() const {
  std::string s = "{";
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(indices_[i]);
  }
  return s + "}";
}

}  // namespace sparsebfs
