#pragma once

#include <map>
#include <optional>
#include <utility>

#include "qtiling/folner.hpp"
#include "qtiling/group.hpp"
#include "qtiling/rational.hpp"

namespace qt {

// Tile identity: shape index plus center.
using TileId = std::pair<int, GroupElement>;

struct TileProvenance {
  int level = 0;  // j
  int stage = 0;  // i
  friend bool operator==(const TileProvenance&, const TileProvenance&) = default;
};

// Shapes plus pairwise disjoint center sets; tiles are the translates
// shape*center with (shape, center) -> tile injective.
class Quasitiling {
 public:
  Quasitiling() = default;
  Quasitiling(Group tag, std::vector<FinSet> shapes,
              std::vector<std::vector<GroupElement>> centers);

  Group tag() const { return tag_; }
  const std::vector<FinSet>& shapes() const { return shapes_; }
  const std::vector<std::vector<GroupElement>>& centers() const {
    return centers_;
  }

  std::size_t tile_count() const;
  std::vector<TileId> tiles() const;
  FinSet tile_set(const TileId& t) const;  // shape * center
  FinSet union_of_tiles() const;

  void set_provenance(const GroupElement& center, TileProvenance p);
  std::optional<TileProvenance> provenance(const GroupElement& center) const;

  // Structural invariants: centers pairwise disjoint across shapes,
  // (shape, center) -> tile injective.  Throws CorruptTilingError.
  void validate() const;

 private:
  Group tag_ = Group::Z;
  std::vector<FinSet> shapes_;
  std::vector<std::vector<GroupElement>> centers_;
  std::map<GroupElement, TileProvenance> provenance_;
};

// Finite-window view: center membership is final inside the determined
// window under any extension of the input point consistent with the
// recorded query support.
struct WindowedTiling {
  Quasitiling tiling;
  FinSet determined_window;
};

// g -> shape index for centers inside the window; positions carrying no
// center are simply absent from the map.
std::map<GroupElement, int> encode_symbolic(const Quasitiling& T,
                                            const FinSet& window);
Quasitiling decode_symbolic(const std::map<GroupElement, int>& pattern,
                            Group tag, const std::vector<FinSet>& shapes);

bool is_disjoint(const Quasitiling& T);

// Cores witnessing eps-disjointness, keyed by tile.
struct DisjointnessWitness {
  std::map<TileId, FinSet> cores;
};

bool check_witness(const Quasitiling& T, const DisjointnessWitness& W,
                   const Rat& eps);

struct FlowCheckResult {
  bool feasible = false;
  std::optional<DisjointnessWitness> witness;
};

// Exact decision of eps-disjointness: each element of the tile union has
// unit capacity toward each tile containing it, tile t demands the least
// integer >= (1-eps)|t|; feasible iff an integral flow meets all demands.
FlowCheckResult eps_disjoint_flow_check(const Quasitiling& T, const Rat& eps);

Rat covering_on_window(const Quasitiling& T, const FinSet& F,
                       const FinSet& window);

}  // namespace qt
