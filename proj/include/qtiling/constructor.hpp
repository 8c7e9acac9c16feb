#pragma once

#include <memory>
#include <unordered_map>
#include <unordered_set>

#include "qtiling/folner.hpp"
#include "qtiling/group.hpp"
#include "qtiling/rational.hpp"
#include "qtiling/symbolic.hpp"
#include "qtiling/tiling.hpp"

namespace qt {

// Minimal r with (1 - eps/2)^r < eps, exact rational powers.
int choose_r(const Rat& eps);

// Per-level perturbation constants delta_1 .. delta_{r-1}: for each j the
// largest dyadic delta such that the level-j density lower bound evaluated
// at (delta, eps) still dominates the bound at (0, 3 eps / 4).
std::vector<Rat> choose_deltas(const Rat& eps, int r, int max_k = 40);

// The bound expression behind choose_deltas, exposed so tests can
// re-evaluate it independently of the search.
Rat level_density_bound(const Rat& delta, const Rat& eps_term, const Rat& q);

// n_1 = n0 + 1; for i > 1, n_i = least index above n_{i-1} whose Folner
// set is (F_{n_j}, delta_j)-invariant for every j < i.  Throws
// InfeasibleError when the search passes family.max_index.
std::vector<int> choose_shape_indices(const FolnerFamily& family, int n0,
                                      const std::vector<Rat>& deltas);

struct ConstructionParams {
  Rat eps;
  int n0 = 0;
  int r = 0;
  std::vector<int> indices;  // n_1 < ... < n_r
  std::vector<Rat> deltas;   // delta_1 .. delta_{r-1}
  FolnerFamily family;
  std::shared_ptr<const SeparatedCover> cover;
  std::vector<FinSet> shapes;  // shapes[j-1] = F_{n_j}

  const FinSet& shape(int level) const {
    return shapes.at(static_cast<std::size_t>(level - 1));
  }
  // Union of all shapes (the separating set the cover must handle).
  FinSet shape_union() const;
  void validate() const;
};

// Derives (r, deltas, indices) from eps and n0.  When explicit_indices is
// given the index search is skipped and the deltas record the defects the
// chosen sets actually achieve.
ConstructionParams make_params(const Rat& eps, int n0,
                               const FolnerFamily& family,
                               std::shared_ptr<const SeparatedCover> cover,
                               const std::vector<int>& explicit_indices = {});

struct StageRecord {
  int level = 0;
  int stage = 0;
  std::vector<GroupElement> added;
};

enum class Status : std::uint8_t { No, Yes, Unknown };

// Full record of a construction run on a finite window.  Statuses are
// three-valued: Yes/No are certified against every extension of the input
// point that agrees with the recorded query support; Unknown marks
// positions whose fate depends on data outside the evaluation window.
class ConstructionTrace {
 public:
  struct Level {
    FinSet shape;
    FinSet shape_inv;
    std::vector<std::pair<GroupElement, int>> centers;  // definite, with stage
    std::vector<GroupElement> unknown;
    std::unordered_map<GroupElement, int, GroupElementHash> center_stage;
    std::unordered_set<GroupElement, GroupElementHash> unknown_set;
    // Earliest stage whose tile certainly / possibly covers a position.
    std::unordered_map<GroupElement, std::pair<int, int>, GroupElementHash>
        cover_min;
  };

  Group tag = Group::Z;
  Rat eps;
  FinSet window;
  std::vector<Level> levels;  // levels[j-1]
  std::vector<StageRecord> stage_records;
  ConstructionParams params;
  ShiftPoint point;
  FinSet query_support;

  int level_count() const { return static_cast<int>(levels.size()); }

  // All coverers of h at this level lie inside the window.
  bool inner_known(int level, const GroupElement& h) const;

  enum class Blocked : std::uint8_t { None, Possible, Definite };
  // Classification of h against the material prior to stage (level, stage):
  // earlier stages of the same level plus all

  // higher levels, phantom centers outside the window included.
  Blocked blocked_status(const GroupElement& h, int level, int stage) const;

  Status center_status(int level, const GroupElement& g,
                       int* stage = nullptr) const;
  // Membership of h in H^(level) = union of tiles of levels >= level.
  Status h_status(int level, const GroupElement& h) const;
  // The complete coverage history of h is determined (no possible coverer
  // precedes a definite one, no phantom reach).
  bool fully_resolved(const GroupElement& h) const;

  FinSet determined_window() const;
  WindowedTiling hat_tiling() const;

 private:
  mutable std::vector<std::unordered_map<GroupElement, bool, GroupElementHash>>
      inner_known_memo_;
  std::optional<int> window_box_radius_;
  friend ConstructionTrace construct_dynamical(const ShiftPoint&,
                                               const ConstructionParams&,
                                               const FinSet&, int, int);
};

// Runs the full decreasing induction (levels r..1, stages in cover order).
// stop_level/stop_stage truncate the run (0,0 = run everything).
ConstructionTrace construct_dynamical(const ShiftPoint& x,
                                      const ConstructionParams& params,
                                      const FinSet& window,
                                      int stop_level = 0, int stop_stage = 0);

// Definite centers added by one stage (recomputed from scratch).
FinSet stage_centers(const ShiftPoint& x, int level, int stage,
                     const ConstructionParams& params, const FinSet& window);

// Priority trimming: every hat tile loses the material already
// claimed by earlier stages and higher levels.  Pairwise disjoint, union
// preserved on the determined window.  Tiles whose trim cannot be
// certified from the window are dropped from the view.
WindowedTiling disjointify(const ConstructionTrace& trace);

struct CongruenceParams {
  FinSet K;
  Rat delta;
  Rat eps;
  Rat delta_prime;
  Rat eta;
  Rat delta_second;
  FinSet U;  // union of the small tiling's shapes
};

CongruenceParams derive_congruence_params(const FinSet& K, const Rat& delta,
                                          const Rat& eps,
                                          const std::vector<FinSet>& small_shapes,
                                          int max_k = 40);

// Builds a big disjoint tiling from params_big, then absorbs or expels
// every small tile: a small tile whose center lies in a big tile is added
// to it, every other overlapping small tile is carved out.
WindowedTiling congruent_refine(const WindowedTiling& small,
                                const ShiftPoint& x,
                                const CongruenceParams& cp,
                                const ConstructionParams& params_big,
                                const FinSet& window);

// Static greedy baseline: canonical candidate order, largest shape first,
// accept g when the new tile meets previously placed material on fewer
// than eps|F| cells.
Quasitiling static_sequential(const FinSet& window,
                              const std::vector<FinSet>& shapes,
                              const Rat& eps);

}  // namespace qt
