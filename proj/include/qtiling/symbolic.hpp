#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "qtiling/group.hpp"

namespace qt {

using Symbol = std::uint8_t;

// A point of a subshift over a finite alphabet, presented as a lazy symbol
// oracle g -> symbol.  Backed either by an explicit partial assignment with
// a default, or by a seeded deterministic generator (optionally both: the
// assignment wins, the generator fills the rest).  Every query is memoized
// and the queried positions are recorded.
//
// Shifted views share the backing state: the view for g evaluates h as the
// base point at h*g, matching (gx)(h) = x(hg).
class ShiftPoint {
 public:
  static ShiftPoint from_pattern(
      Group tag, std::vector<std::string> alphabet, Symbol default_symbol,
      std::unordered_map<GroupElement, Symbol, GroupElementHash> assignments);
  static ShiftPoint from_seed(Group tag, std::vector<std::string> alphabet,
                              std::uint64_t seed);
  // Explicit assignments over a seeded background.
  static ShiftPoint from_pattern_over_seed(
      Group tag, std::vector<std::string> alphabet, std::uint64_t seed,
      std::unordered_map<GroupElement, Symbol, GroupElementHash> assignments);

  Group tag() const;
  const std::vector<std::string>& alphabet() const;

  Symbol eval(const GroupElement& g) const;

  // View of this point shifted by g (shares memo and support).
  ShiftPoint shifted(const GroupElement& g) const;

  // Recorded query support of the backing point, as base coordinates.
  FinSet support_snapshot() const;
  std::size_t support_size() const;
  // Memoized values on the recorded support.
  std::unordered_map<GroupElement, Symbol, GroupElementHash> memo_snapshot()
      const;

 private:
  struct State;
  std::shared_ptr<State> state_;
  GroupElement offset_;  // identity for base points
  bool shifted_ = false;
};

Symbol eval_point(const ShiftPoint& x, const GroupElement& g);

// (gx)(h) = x(hg)
Symbol shift_eval(const ShiftPoint& x, const GroupElement& g,
                  const GroupElement& h);

// Clopen set realized as a cylinder: points matching `pattern` on window V.
// pattern is aligned with V.elements() order.
struct CylinderSpec {
  FinSet window;
  std::vector<Symbol> pattern;
};

bool in_cylinder(const ShiftPoint& x, const CylinderSpec& U,
                 const GroupElement& g);

std::vector<Symbol> pattern_at(const ShiftPoint& x, const FinSet& V,
                               const GroupElement& g);

// Ordered cylinder cover with separation certificates for a finite set
// F~: for every cylinder U and distinct g, g' in F~ the translated pattern
// constraints force conflicting symbols somewhere, hence g(U) and g'(U)
// are disjoint.  The order of the cylinders is part of the identity.
class SeparatedCover {
 public:
  SeparatedCover() = default;
  SeparatedCover(FinSet window, std::vector<std::vector<Symbol>> patterns,
                 FinSet separating_set, bool check = true);

  const FinSet& window() const { return window_; }
  const FinSet& separating_set() const { return ftilde_; }
  std::size_t size() const { return patterns_.size(); }
  CylinderSpec cylinder(std::size_t i) const;
  const std::vector<Symbol>& pattern(std::size_t i) const {
    return patterns_[i];
  }

  // Index of the cylinder matching this pattern, or nullopt.
  std::optional<std::size_t> pattern_index(
      const std::vector<Symbol>& p) const;

  // Witness position v with v, v*d in V and pattern conflicting with its
  // d-translate, d = inv(g) * g'.  nullopt when no conflict exists.
  std::optional<GroupElement> certificate(std::size_t i, const GroupElement& g,
                                          const GroupElement& gp) const;

  // Re-checks every certificate; throws SeparationError on failure.
  void verify_separation() const;

 private:
  FinSet window_;
  std::vector<std::vector<Symbol>> patterns_;
  FinSet ftilde_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash_;

  void index_patterns();
  std::optional<GroupElement> conflict_witness(std::size_t i,
                                               const GroupElement& d) const;
  std::vector<GroupElement> difference_set() const;

  friend SeparatedCover build_separated_cover(
      const std::vector<ShiftPoint>& samples, const FinSet& ftilde,
      const FinSet& probe_window, int max_radius);
};

std::uint64_t pattern_hash(const std::vector<Symbol>& p);

// Grows the cylinder window from {e} by group balls until every distinct
// pattern observed on V*g (g in probe_window, over all samples) carries
// separation certificates for ftilde.  Cylinder order is first-observation
// order, hence deterministic given the inputs.
SeparatedCover build_separated_cover(const std::vector<ShiftPoint>& samples,
                                     const FinSet& ftilde,
                                     const FinSet& probe_window,
                                     int max_radius = 64);

}  // namespace qt
