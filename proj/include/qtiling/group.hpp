#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qtiling/errors.hpp"

namespace qt {

enum class Group : std::uint8_t { Z, Z2, Heisenberg };

std::string group_name(Group g);
Group group_from_name(const std::string& name);
int group_rank(Group g);  // number of meaningful coordinates

// Element in canonical normal form.  Coordinates beyond the group's rank
// are always zero, so lexicographic comparison on the raw tuple is a
// total order on each group.
struct GroupElement {
  Group tag = Group::Z;
  std::array<std::int64_t, 3> c{0, 0, 0};

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
  friend auto operator<=>(const GroupElement& a, const GroupElement& b) {
    if (auto t = a.tag <=> b.tag; t != 0) return t;
    return a.c <=> b.c;
  }
};

GroupElement identity(Group g);
GroupElement make_element(Group g, std::int64_t a, std::int64_t b = 0,
                          std::int64_t c = 0);
GroupElement mul(const GroupElement& a, const GroupElement& b);
GroupElement inv(const GroupElement& a);
std::string to_string(const GroupElement& g);

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(g.tag);
    for (auto v : g.c) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) +
           (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Finite subset of a group: deduplicated, sorted lexicographically on the
// coordinate tuple, so iteration order is deterministic.
class FinSet {
 public:
  FinSet() = default;
  explicit FinSet(Group tag) : tag_(tag) {}
  FinSet(Group tag, std::vector<GroupElement> elems);

  Group tag() const { return tag_; }
  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(const GroupElement& g) const;
  const std::vector<GroupElement>& elements() const& { return elems_; }
  const std::vector<GroupElement>& elements() const&& = delete;

  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  friend bool operator==(const FinSet&, const FinSet&) = default;

 private:
  Group tag_ = Group::Z;
  std::vector<GroupElement> elems_;
};

FinSet set_product(const FinSet& K, const FinSet& T);
FinSet set_symdiff(const FinSet& A, const FinSet& B);
FinSet set_union(const FinSet& A, const FinSet& B);
FinSet set_difference(const FinSet& A, const FinSet& B);
FinSet set_intersection(const FinSet& A, const FinSet& B);
FinSet set_translate(const FinSet& A, const GroupElement& g);  // A·g
FinSet set_inverse(const FinSet& A);
bool is_subset(const FinSet& A, const FinSet& B);

// Symmetric box-shaped Folner sets containing the unit:
//   Z:          [-n, n]
//   Z2:         [-n, n]^2
//   Heisenberg: |a|,|b| <= n, |c| <= n^2 and |c - ab| <= n^2 (the second
//               constraint keeps the set closed under inversion, which the
//               plain |c| <= n^2 box is not)
FinSet box(Group g, int n);

}  // namespace qt
