#pragma once

#include <algorithm>
#include <vector>

#include "mpcsim/errors.hpp"

namespace mpcsim {

// Sorted, duplicate-free subset of [0, n).
struct Committee {
  std::vector<int> members;

  Committee() = default;
  explicit Committee(std::vector<int> m) : members(std::move(m)) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
  }

  bool contains(int p) const {
    return std::binary_search(members.begin(), members.end(), p);
  }
  size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  int lowest() const {
    if (members.empty()) throw SpecError("empty committee");
    return members.front();
  }

  void validate(int n) const {
    if (members.empty()) throw SpecError("empty committee");
    if (members.front() < 0 || members.back() >= n)
      throw SpecError("committee member out of range");
  }

  friend bool operator==(const Committee& a, const Committee& b) {
    return a.members == b.members;
  }
  friend bool operator<(const Committee& a, const Committee& b) {
    return a.members < b.members;
  }
};

inline bool subset_of(const std::vector<int>& a, const std::vector<int>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline bool contains_sorted(const std::vector<int>& v, int x) {
  return std::binary_search(v.begin(), v.end(), x);
}

inline std::vector<int> intersect_sorted(const std::vector<int>& a,
                                         const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

}  // namespace mpcsim
