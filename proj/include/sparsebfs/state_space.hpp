#pragma once

#include "sparsebfs/numeric.hpp"

#include <string>
#include <vector>

namespace sparsebfs {

/// Node of the state-space tree over index subsets of {0, …, d−1}.
///
/// A node S (strictly increasing) may only grow by indices beyond its
/// largest element, so its subtree covers the supports that agree with S
/// on S_≤ = {0, …, max S} and pick the rest from S_> = {max S + 1, …, d−1}.
/// The root is the empty set, for which S_> is everything.
class Node {
 public:
  Node() = default;
  Node(Support indices, int d, int k);

  static Node root(int d, int k) { return Node({}, d, k); }

  const Support& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  int d() const { return d_; }
  int k() const { return k_; }

  /// First index of S_> (0 for the root).
  int frontier() const { return indices_.empty() ? 0 : indices_.back() + 1; }
  /// |S_>|
  int tail_size() const { return d_ - frontier(); }

  bool is_leaf() const { return size() == k_; }
  Node parent() const;
  std::vector<Node> children() const;

  bool contains(int i) const;

  /// True iff some node in this subtree contains every index of target.
  bool covers_support(const Support& target) const;

  std::string to_string() const;

  friend bool operator==(const Node& a, const Node& b) {
    return a.d_ == b.d_ && a.k_ == b.k_ && a.indices_ == b.indices_;
  }

 private:
  Support indices_;
  int d_ = 0;
  int k_ = 0;
};

/// |S| ≤ k and k − |S| ≤ d − (max S + 1), i.e. S can still be completed to
/// size k with larger indices. S must be strictly increasing within [0, d).
bool is_node(const Support& indices, int d, int k);

}  // namespace sparsebfs
