#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace ballmapper {

// Disjoint sets with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), sets_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Returns true when a and b were in different sets.
  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --sets_;
    return true;
  }

  bool connected(std::size_t a, std::size_t b) noexcept { return find(a) == find(b); }

  std::size_t set_count() const noexcept { return sets_; }
  std::size_t size() const noexcept { return parent_.size(); }

  // Label of every element = smallest element of its set.
  std::vector<std::size_t> canonical_labels() {
    const std::size_t n = parent_.size();
    std::vector<std::size_t> smallest(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = find(i);
      if (smallest[r] == n) smallest[r] = i;
    }
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = smallest[find(i)];
    return labels;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::size_t sets_;
};

// Component count plus a canonical label per element.
struct Components {
  std::size_t count = 0;
  std::vector<std::size_t> labels;

  friend bool operator==(const Components&, const Components&) = default;
};

}  // namespace ballmapper
