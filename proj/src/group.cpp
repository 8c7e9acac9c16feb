#include "qtiling/group.hpp"

#include <algorithm>
#include <limits>

namespace qt {

std::string group_name(Group g) {
  switch (g) {
    case Group::Z:
      return "Z";
    case Group::Z2:
      return "Z2";
    case Group::Heisenberg:
      return "H3";
  }
  return "?";
}

Group group_from_name(const std::string& name) {
  if (name == "Z") return Group::Z;
  if (name == "Z2") return Group::Z2;
  if (name == "H3" || name == "Heisenberg") return Group::Heisenberg;
  throw InputError("unknown group: " + name);
}

int group_rank(Group g) {
  switch (g) {
    case Group::Z:
      return 1;
    case Group::Z2:
      return 2;
    case Group::Heisenberg:
      return 3;
  }
  return 0;
}

GroupElement identity(Group g) { return GroupElement{g, {0, 0, 0}}; }

GroupElement make_element(Group g, std::int64_t a, std::int64_t b,
                          std::int64_t c) {
  GroupElement e{g, {a, b, c}};
  int rank = group_rank(g);
  for (int i = rank; i < 3; ++i) {
    if (e.c[i] != 0) throw PreconditionError("coordinate beyond group rank");
  }
  return e;
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw PreconditionError("integer overflow in group arithmetic");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw PreconditionError("integer overflow in group arithmetic");
  return r;
}

}  // namespace

GroupElement mul(const GroupElement& a, const GroupElement& b) {
  if (a.tag != b.tag) throw TagMismatchError("mul: mixed group tags");
  GroupElement r{a.tag, {0, 0, 0}};
  switch (a.tag) {
    case Group::Z:
      r.c[0] = checked_add(a.c[0], b.c[0]);
      break;
    case Group::Z2:
      r.c[0] = checked_add(a.c[0], b.c[0]);
      r.c[1] = checked_add(a.c[1], b.c[1]);
      break;
    case Group::Heisenberg:
      // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a b')
      r.c[0] = checked_add(a.c[0], b.c[0]);
      r.c[1] = checked_add(a.c[1], b.c[1]);
      r.c[2] = checked_add(checked_add(a.c[2], b.c[2]),
                           checked_mul(a.c[0], b.c[1]));
      break;
  }
  return r;
}

GroupElement inv(const GroupElement& a) {
  GroupElement r{a.tag, {0, 0, 0}};
  switch (a.tag) {
    case Group::Z:
      r.c[0] = -a.c[0];
      break;
    case Group::Z2:
      r.c[0] = -a.c[0];
      r.c[1] = -a.c[1];
      break;
    case Group::Heisenberg:
      r.c[0] = -a.c[0];
      r.c[1] = -a.c[1];
      r.c[2] = checked_add(-a.c[2], checked_mul(a.c[0], a.c[1]));
      break;
  }
  return r;
}

std::string to_string(const GroupElement& g) {
  std::string s = "(";
  int rank = group_rank(g.tag);
  for (int i = 0; i < rank; ++i) {
    if (i) s += ",";
    s += std::to_string(g.c[i]);
  }
  return s + ")";
}

FinSet::FinSet(Group tag, std::vector<GroupElement> elems)
    : tag_(tag), elems_(std::move(elems)) {
  for (const auto& e : elems_) {
    if (e.tag != tag_) throw TagMismatchError("FinSet: mixed group tags");
  }
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool FinSet::contains(const GroupElement& g) const {
  return std::binary_search(elems_.begin(), elems_.end(), g);
}

namespace {
void require_same_tag(const FinSet& a, const FinSet& b, const char* op) {
  if (a.tag() != b.tag())
    throw TagMismatchError(std::string(op) + ": mixed group tags");
}
}  // namespace

FinSet set_product(const FinSet& K, const FinSet& T) {
  require_same_tag(K, T, "set_product");
  std::vector<GroupElement> out;
  out.reserve(K.size() * T.size());
  for (const auto& g : K)
    for (const auto& h : T) out.push_back(mul(g, h));
  return FinSet(K.tag(), std::move(out));
}

FinSet set_symdiff(const FinSet& A, const FinSet& B) {
  require_same_tag(A, B, "set_symdiff");
  std::vector<GroupElement> out;
  std::set_symmetric_difference(A.begin(), A.end(), B.begin(), B.end(),
                                std::back_inserter(out));
  return FinSet(A.tag(), std::move(out));
}

FinSet set_union(const FinSet& A, const FinSet& B) {
  require_same_tag(A, B, "set_union");
  std::vector<GroupElement> out;
  std::set_union(A.begin(), A.end(), B.begin(), B.end(),
                 std::back_inserter(out));
  return FinSet(A.tag(), std::move(out));
}

FinSet set_difference(const FinSet& A, const FinSet& B) {
  require_same_tag(A, B, "set_difference");
  std::vector<GroupElement> out;
  std::set_difference(A.begin(), A.end(), B.begin(), B.end(),
                      std::back_inserter(out));
  return FinSet(A.tag(), std::move(out));
}

FinSet set_intersection(const FinSet& A, const FinSet& B) {
  require_same_tag(A, B, "set_intersection");
  std::vector<GroupElement> out;
  std::set_intersection(A.begin(), A.end(), B.begin(), B.end(),
                        std::back_inserter(out));
  return FinSet(A.tag(), std::move(out));
}

FinSet set_translate(const FinSet& A, const GroupElement& g) {
  std::vector<GroupElement> out;
  out.reserve(A.size());
  for (const auto& a : A) out.push_back(mul(a, g));
  return FinSet(A.tag(), std::move(out));
}

FinSet set_inverse(const FinSet& A) {
  std::vector<GroupElement> out;
  out.reserve(A.size());
  for (const auto& a : A) out.push_back(inv(a));
  return FinSet(A.tag(), std::move(out));
}

bool is_subset(const FinSet& A, const FinSet& B) {
  return std::includes(B.begin(), B.end(), A.begin(), A.end());
}

FinSet box(Group g, int n) {
  if (n < 0) throw PreconditionError("box: n must be nonnegative");
  std::vector<GroupElement> out;
  std::int64_t N = n;
  switch (g) {
    case Group::Z:
      for (std::int64_t a = -N; a <= N; ++a)
        out.push_back(GroupElement{g, {a, 0, 0}});
      break;
    case Group::Z2:
      for (std::int64_t a = -N; a <= N; ++a)
        for (std::int64_t b = -N; b <= N; ++b)
          out.push_back(GroupElement{g, {a, b, 0}});
      break;
    case Group::Heisenberg: {
      std::int64_t n2 = N * N;
      for (std::int64_t a = -N; a <= N; ++a)
        for (std::int64_t b = -N; b <= N; ++b) {
          std::int64_t lo = std::max(-n2, a * b - n2);
          std::int64_t hi = std::min(n2, a * b + n2);
          for (std::int64_t c = lo; c <= hi; ++c)
            out.push_back(GroupElement{g, {a, b, c}});
        }
      break;
    }
  }
  return FinSet(g, std::move(out));
}

}  // namespace qt
