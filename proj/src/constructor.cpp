#include "qtiling/constructor.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <map>

#include "qtiling/errors.hpp"

namespace qt {

namespace {

Rat rat_pow(const Rat& base, int e) {
  Rat out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

void require(bool ok, const char* msg) {
  if (!ok) throw PreconditionError(msg);
}

}  // namespace

int choose_r(const Rat& eps) {
  require(eps > 0 && eps < 1, "choose_r: eps must lie in (0, 1)");
  const Rat factor = 1 - eps / 2;
  Rat pw = factor;
  for (int r = 1; r <= 4096; ++r) {
    if (pw < eps) return r;
    pw *= factor;
  }
  throw InfeasibleError("choose_r: no r <= 4096 satisfies the bound");
}

Rat level_density_bound(const Rat& delta, const Rat& eps_term, const Rat& q) {
  const Rat d1 = 1 + delta;
  return (1 - q) / (d1 * d1) - delta / d1 + eps_term * (1 / d1 - d1 * (1 - q));
}

std::vector<Rat> choose_deltas(const Rat& eps, int r, int max_k) {
  require(eps > 0 && eps < 1, "choose_deltas: eps must lie in (0, 1)");
  require(r >= 1, "choose_deltas: r must be positive");
  std::vector<Rat> out;
  out.reserve(static_cast<std::size_t>(r > 0 ? r - 1 : 0));
  const Rat factor = 1 - eps / 2;
  for (int j = 1; j < r; ++j) {
    const Rat q = rat_pow(factor, r - j);
    const Rat target = level_density_bound(0, 3 * eps / 4, q);
    auto ok = [&](const Rat& d) {
      return level_density_bound(d, eps, q) >= target;
    };
    auto d = largest_dyadic(max_k, ok);
    if (!d)
      throw InfeasibleError("choose_deltas: no dyadic delta meets the bound");
    out.push_back(*d);
  }
  return out;
}

std::vector<int> choose_shape_indices(const FolnerFamily& family, int n0,
                                      const std::vector<Rat>& deltas) {
  require(n0 >= 0, "choose_shape_indices: n0 must be nonnegative");
  const int r = static_cast<int>(deltas.size()) + 1;
  std::vector<int> indices;
  indices.push_back(n0 + 1);
  std::vector<FinSet> sets;
  sets.push_back(family.set(n0 + 1));
  for (int i = 2; i <= r; ++i) {
    auto feasible = [&](int n) {
      const FinSet cand = family.set(n);
      for (int j = 0; j + 1 < i; ++j)
        if (!(invariance_defect(cand, sets[static_cast<std::size_t>(j)]) <
              deltas[static_cast<std::size_t>(j)]))
          return false;
      return true;
    };
    // Defects of box families decrease in the index; gallop to a feasible
    // index, then binary-search the least one.
    const int lo0 = indices.back() + 1;
    if (lo0 > family.max_index)
      throw InfeasibleError("choose_shape_indices: family too coarse");
    int hi = lo0, step = 1;
    while (!feasible(hi)) {
      if (hi >= family.max_index)
        throw InfeasibleError("choose_shape_indices: family too coarse");
      hi = std::min(family.max_index, hi + step);
      step *= 2;
    }
    int lo = lo0;
    while (lo < hi) {
      const int mid = lo + (hi - lo) / 2;
      if (feasible(mid))
        hi = mid;
      else
        lo = mid + 1;
    }
    indices.push_back(lo);
    sets.push_back(family.set(lo));
  }
  return indices;
}

FinSet ConstructionParams::shape_union() const {
  require(!shapes.empty(), "params: no shapes");
  FinSet u = shapes.front();
  for (std::size_t i = 1; i < shapes.size(); ++i) u = set_union(u, shapes[i]);
  return u;
}

void ConstructionParams::validate() const {
  require(eps > 0 && eps < 1, "params: eps must lie in (0, 1)");
  require(r >= 1, "params: r must be positive");
  require(rat_pow(1 - eps / 2, r) < eps, "params: (1 - eps/2)^r < eps fails");
  require(static_cast<int>(indices.size()) == r, "params: index count != r");
  require(static_cast<int>(deltas.size()) == r - 1,
          "params: delta count != r - 1");
  require(indices.front() == n0 + 1, "params: n_1 != n0 + 1");
  for (std::size_t i = 1; i < indices.size(); ++i)
    require(indices[i] > indices[i - 1], "params: indices not increasing");
  require(static_cast<int>(shapes.size()) == r, "params: shape count != r");
  for (const auto& s : shapes) {
    require(s.tag() == family.tag, "params: shape tag mismatch");
    require(s.contains(identity(family.tag)), "params: shape misses identity");
  }
  for (int i = 2; i <= r; ++i)
    for (int j = 0; j + 1 < i; ++j)
      require(invariance_defect(shapes[static_cast<std::size_t>(i - 1)],
                                shapes[static_cast<std::size_t>(j)]) <
                  deltas[static_cast<std::size_t>(j)],
              "params: invariance chain violated");
  require(cover != nullptr, "params: missing cover");
  require(cover->window().tag() == family.tag, "params: cover tag mismatch");
}

ConstructionParams make_params(const Rat& eps, int n0,
                               const FolnerFamily& family,
                               std::shared_ptr<const SeparatedCover> cover,
                               const std::vector<int>& explicit_indices) {
  ConstructionParams p;
  p.eps = eps;
  p.family = family;
  p.cover = std::move(cover);
  if (explicit_indices.empty()) {
    p.r = choose_r(eps);
    p.deltas = choose_deltas(eps, p.r);
    p.indices = choose_shape_indices(family, n0, p.deltas);
    p.n0 = n0;
  } else {
    p.r = static_cast<int>(explicit_indices.size());
    require(rat_pow(1 - eps / 2, p.r) < eps,
            "make_params: explicit index count below choose_r(eps)");
    p.indices = explicit_indices;
    p.n0 = explicit_indices.front() - 1;
  }
  for (int idx : p.indices) {
    require(idx >= 1 && idx <= family.max_index,
            "make_params: index outside family range");
    p.shapes.push_back(family.set(idx));
  }
  if (!explicit_indices.empty()) {
    // Record the defects the explicit chain actually achieves, nudged up
    // so the strict invariance comparison in validate() holds.
    for (int j = 0; j + 1 < p.r; ++j) {
      Rat worst = 0;
      for (int i = j + 1; i < p.r; ++i)
        worst = std::max(worst,
                         invariance_defect(p.shapes[static_cast<std::size_t>(i)],
                                           p.shapes[static_cast<std::size_t>(j)]));
      p.deltas.push_back(worst + dyadic(30));
    }
  }
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// Construction engine
// ---------------------------------------------------------------------------

namespace {

constexpr int kNoStage = std::numeric_limits<int>::max();

std::optional<int> detect_box_radius(const FinSet& window) {
  if (window.size() == 0) return std::nullopt;
  std::int64_t radius = 0;
  for (const auto& g : window.elements())
    for (std::size_t i = 0; i < group_rank(window.tag()); ++i)
      radius = std::max<std::int64_t>(radius, std::llabs(g.c[i]));
  if (radius > (1 << 20)) return std::nullopt;
  const int n = static_cast<int>(radius);
  if (window == box(window.tag(), n)) return n;
  return std::nullopt;
}

}  // namespace

bool ConstructionTrace::inner_known(int level, const GroupElement& h) const {
  const auto& lv = levels[static_cast<std::size_t>(level - 1)];
  if (window_box_radius_) {
    // Coverers of h form shape^{-1} h; for a box window this reduces to a
    // coordinate bound.  Shape indices are box radii for every family.
    const std::int64_t margin =
        *window_box_radius_ -
        params.indices[static_cast<std::size_t>(level - 1)];
    if (margin < 0) return false;
    if (tag != Group::Heisenberg) {
      for (std::size_t i = 0; i < group_rank(tag); ++i)
        if (std::llabs(h.c[i]) > margin) return false;
      return true;
    }
  }
  auto& memo = inner_known_memo_[static_cast<std::size_t>(level - 1)];
  auto it = memo.find(h);
  if (it != memo.end()) return it->second;
  bool ok = true;
  for (const auto& f : lv.shape_inv.elements())
    if (!window.contains(mul(f, h))) {
      ok = false;
      break;
    }
  memo.emplace(h, ok);
  return ok;
}

ConstructionTrace::Blocked ConstructionTrace::blocked_status(
    const GroupElement& h, int level, int stage) const {
  bool possible = false;
  for (int l = level + 1; l <= level_count(); ++l) {
    const auto& lv = levels[static_cast<std::size_t>(l - 1)];
    auto it = lv.cover_min.find(h);
    if (it != lv.cover_min.end()) {
      if (it->second.first != kNoStage) return Blocked::Definite;
      if (it->second.second != kNoStage) possible = true;
    }
    if (!possible && !inner_known(l, h)) possible = true;
  }
  const auto& lv = levels[static_cast<std::size_t>(level - 1)];
  auto it = lv.cover_min.find(h);
  if (it != lv.cover_min.end()) {
    if (it->second.first < stage) return Blocked::Definite;
    if (it->second.second < stage) possible = true;
  }
  if (stage >= 2 && !inner_known(level, h)) possible = true;
  return possible ? Blocked::Possible : Blocked::None;
}

Status ConstructionTrace::center_status(int level, const GroupElement& g,
                                        int* stage) const {
  const auto& lv = levels[static_cast<std::size_t>(level - 1)];
  auto it = lv.center_stage.find(g);
  if (it != lv.center_stage.end()) {
    if (stage) *stage = it->second;
    return Status::Yes;
  }
  if (lv.unknown_set.count(g)) return Status::Unknown;
  return window.contains(g) ? Status::No : Status::Unknown;
}

Status ConstructionTrace::h_status(int level, const GroupElement& h) const {
  bool possible = false;
  for (int l = level; l <= level_count(); ++l) {
    const auto& lv = levels[static_cast<std::size_t>(l - 1)];
    auto it = lv.cover_min.find(h);
    if (it != lv.cover_min.end()) {
      if (it->second.first != kNoStage) return Status::Yes;
      if (it->second.second != kNoStage) possible = true;
    }
    if (!possible && !inner_known(l, h)) possible = true;
  }
  return possible ? Status::Unknown : Status::No;
}

bool ConstructionTrace::fully_resolved(const GroupElement& h) const {
  for (int l = 1; l <= level_count(); ++l) {
    if (!inner_known(l, h)) return false;
    const auto& lv = levels[static_cast<std::size_t>(l - 1)];
    auto it = lv.cover_min.find(h);
    const int def = it == lv.cover_min.end() ? kNoStage : it->second.first;
    const int pos = it == lv.cover_min.end() ? kNoStage : it->second.second;
    if (pos != def) return false;
  }
  return true;
}

FinSet ConstructionTrace::determined_window() const {
  std::vector<GroupElement> out;
  for (const auto& g : window.elements()) {
    bool ok = true;
    for (const auto& lv : levels)
      if (lv.unknown_set.count(g)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(g);
  }
  return FinSet(tag, std::move(out));
}

WindowedTiling ConstructionTrace::hat_tiling() const {
  std::vector<FinSet> shapes;
  std::vector<std::vector<GroupElement>> centers;
  for (int j = 1; j <= level_count(); ++j) {
    const auto& lv = levels[static_cast<std::size_t>(j - 1)];
    shapes.push_back(lv.shape);
    std::vector<GroupElement> cs;
    for (const auto& [c, stage] : lv.centers) cs.push_back(c);
    centers.push_back(std::move(cs));
  }
  Quasitiling t(tag, std::move(shapes), std::move(centers));
  for (int j = 1; j <= level_count(); ++j)
    for (const auto& [c, stage] : levels[static_cast<std::size_t>(j - 1)].centers)
      t.set_provenance(c, TileProvenance{j, stage});
  return WindowedTiling{std::move(t), determined_window()};
}

ConstructionTrace construct_dynamical(const ShiftPoint& x,
                                      const ConstructionParams& params,
                                      const FinSet& window, int stop_level,
                                      int stop_stage) {
  params.validate();
  require(window.tag() == params.family.tag, "construct: window tag mismatch");
  require(x.tag() == params.family.tag, "construct: point tag mismatch");

  ConstructionTrace tr;
  tr.tag = window.tag();
  tr.eps = params.eps;
  tr.window = window;
  tr.params = params;
  tr.point = x;
  tr.window_box_radius_ = detect_box_radius(window);
  const int r = params.r;
  tr.levels.resize(static_cast<std::size_t>(r));
  tr.inner_known_memo_.resize(static_cast<std::size_t>(r));
  for (int j = 1; j <= r; ++j) {
    auto& lv = tr.levels[static_cast<std::size_t>(j - 1)];
    lv.shape = params.shape(j);
    lv.shape_inv = set_inverse(lv.shape);
  }

  const SeparatedCover& cover = *params.cover;
  const int m = static_cast<int>(cover.size());

  // Stage membership of each window position: the index of the cylinder
  // its pattern matches, -1 when the pattern lies outside the cover.
  std::vector<std::vector<GroupElement>> by_stage(
      static_cast<std::size_t>(m));
  for (const auto& g : window.elements()) {
    const auto pid = cover.pattern_index(pattern_at(x, cover.window(), g));
    if (pid) by_stage[*pid].push_back(g);
  }

  for (int j = r; j >= 1; --j) {
    auto& lv = tr.levels[static_cast<std::size_t>(j - 1)];
    const Rat cap = tr.eps * Rat(lv.shape.size());
    for (int i = 1; i <= m; ++i) {
      StageRecord rec;
      rec.level = j;
      rec.stage = i;
      std::vector<GroupElement> unknown_here;
      for (const auto& g : by_stage[static_cast<std::size_t>(i - 1)]) {
        std::int64_t def_cnt = 0, pos_cnt = 0;
        for (const auto& f : lv.shape.elements()) {
          const auto b = tr.blocked_status(mul(f, g), j, i);
          if (b == ConstructionTrace::Blocked::Definite) {
            ++def_cnt;
            ++pos_cnt;
          } else if (b == ConstructionTrace::Blocked::Possible) {
            ++pos_cnt;
          }
        }
        if (Rat(pos_cnt) < cap)
          rec.added.push_back(g);
        else if (Rat(def_cnt) < cap)
          unknown_here.push_back(g);
        // else: definitely rejected.
      }
      // Stage decisions are simultaneous: coverage updates land only after
      // every candidate of the stage has been classified.
      for (const auto& g : rec.added) {
        lv.centers.emplace_back(g, i);
        lv.center_stage.emplace(g, i);
        for (const auto& f : lv.shape.elements()) {
          auto& mins = lv.cover_min
                           .try_emplace(mul(f, g),
                                        std::make_pair(kNoStage, kNoStage))
                           .first->second;
          mins.first = std::min(mins.first, i);
          mins.second = std::min(mins.second, i);
        }
      }
      for (const auto& g : unknown_here) {
        lv.unknown.push_back(g);
        lv.unknown_set.insert(g);
        for (const auto& f : lv.shape.elements()) {
          auto& mins = lv.cover_min
                           .try_emplace(mul(f, g),
                                        std::make_pair(kNoStage, kNoStage))
                           .first->second;
          mins.second = std::min(mins.second, i);
        }
      }
      tr.stage_records.push_back(std::move(rec));
      if (j == stop_level && i == stop_stage) {
        tr.query_support = x.support_snapshot();
        return tr;
      }
    }
    std::sort(lv.centers.begin(), lv.centers.end());
    std::sort(lv.unknown.begin(), lv.unknown.end());
  }
  tr.query_support = x.support_snapshot();
  return tr;
}

FinSet stage_centers(const ShiftPoint& x, int level, int stage,
                     const ConstructionParams& params, const FinSet& window) {
  require(level >= 1 && level <= params.r, "stage_centers: bad level");
  require(stage >= 1 &&
              stage <= static_cast<int>(params.cover ? params.cover->size() : 0),
          "stage_centers: bad stage");
  ConstructionTrace tr = construct_dynamical(x, params, window, level, stage);
  for (auto it = tr.stage_records.rbegin(); it != tr.stage_records.rend(); ++it)
    if (it->level == level && it->stage == stage)
      return FinSet(window.tag(), it->added);
  throw PreconditionError("stage_centers: stage not reached");
}

// ---------------------------------------------------------------------------
// Disjointification
// ---------------------------------------------------------------------------

namespace {

struct TrimmedTile {
  int level;
  int stage;
  GroupElement center;
  std::vector<GroupElement> cells;
};

}  // namespace

WindowedTiling disjointify(const ConstructionTrace& trace) {
  std::vector<TrimmedTile> tiles;
  // Priority order is (level descending, stage ascending); a cell stays
  // with the first tile that reaches it.
  std::unordered_set<GroupElement, GroupElementHash> dropped_centers;
  for (int j = trace.level_count(); j >= 1; --j) {
    const auto& lv = trace.levels[static_cast<std::size_t>(j - 1)];
    for (const auto& [c, stage] : lv.centers) {
      TrimmedTile t;
      t.level = j;
      t.stage = stage;
      t.center = c;
      bool exact = true;
      for (const auto& f : lv.shape.elements()) {
        const GroupElement h = mul(f, c);
        switch (trace.blocked_status(h, j, stage)) {
          case ConstructionTrace::Blocked::None:
            t.cells.push_back(h);
            break;
          case ConstructionTrace::Blocked::Definite:
            break;
          case ConstructionTrace::Blocked::Possible:
            exact = false;
            break;
        }
        if (!exact) break;
      }
      if (exact && !t.cells.empty())
        tiles.push_back(std::move(t));
      else
        dropped_centers.insert(c);
    }
  }

  // Deduplicate trimmed shapes (tile translated back to its center).
  std::map<std::vector<GroupElement>, int> shape_ids;
  std::vector<FinSet> shapes;
  std::vector<std::vector<GroupElement>> centers;
  for (const auto& t : tiles) {
    const GroupElement cinv = inv(t.center);
    std::vector<GroupElement> shape_elems;
    shape_elems.reserve(t.cells.size());
    for (const auto& h : t.cells) shape_elems.push_back(mul(h, cinv));
    std::sort(shape_elems.begin(), shape_elems.end());
    auto [it, fresh] =
        shape_ids.try_emplace(shape_elems, static_cast<int>(shapes.size()));
    if (fresh) {
      shapes.emplace_back(trace.tag, shape_elems);
      centers.emplace_back();
    }
    centers[static_cast<std::size_t>(it->second)].push_back(t.center);
  }

  // A cell is determined for the disjoint view when its whole coverage
  // history is resolved and its keeper tile survived the trim.
  std::vector<GroupElement> determined;
  for (const auto& h : trace.window.elements()) {
    if (!trace.fully_resolved(h)) continue;
    bool ok = true;
    for (int j = trace.level_count(); j >= 1; --j) {
      const auto& lv = trace.levels[static_cast<std::size_t>(j - 1)];
      auto it = lv.cover_min.find(h);
      if (it == lv.cover_min.end() || it->second.first == kNoStage) continue;
      const int stage = it->second.first;
      // Keeper lives at this level and stage; check it was not dropped.
      bool keeper_ok = true;
      for (const auto& f : lv.shape_inv.elements()) {
        const GroupElement c = mul(f, h);
        auto cs = lv.center_stage.find(c);
        if (cs != lv.center_stage.end() && cs->second == stage &&
            dropped_centers.count(c)) {
          keeper_ok = false;
          break;
        }
      }
      ok = keeper_ok;
      break;
    }
    if (ok) determined.push_back(h);
  }

  Quasitiling qt_out(trace.tag, std::move(shapes), std::move(centers));
  for (const auto& t : tiles)
    qt_out.set_provenance(t.center, TileProvenance{t.level, t.stage});
  return WindowedTiling{std::move(qt_out),
                        FinSet(trace.tag, std::move(determined))};
}

// ---------------------------------------------------------------------------
// Congruence
// ---------------------------------------------------------------------------

CongruenceParams derive_congruence_params(const FinSet& K, const Rat& delta,
                                          const Rat& eps,
                                          const std::vector<FinSet>& small_shapes,
                                          int max_k) {
  require(!small_shapes.empty(), "congruence: no small shapes");
  require(delta > 0 && delta < 1, "congruence: delta must lie in (0, 1)");
  require(eps > 0 && eps < 1, "congruence: eps must lie in (0, 1)");
  CongruenceParams cp;
  cp.K = K;
  cp.delta = delta;
  cp.eps = eps;
  cp.U = small_shapes.front();
  for (std::size_t i = 1; i < small_shapes.size(); ++i)
    cp.U = set_union(cp.U, small_shapes[i]);

  const Rat ksz(K.size());
  auto eta_keeps_covering = [&](const Rat& eta) {
    return (1 - eps / 2) * (1 - eta) > 1 - eps;
  };
  // Largest eta compatible with the covering loss, shrunk until a
  // delta-prime exists for the perturbation bound.
  auto eta0 = largest_dyadic(max_k, eta_keeps_covering);
  if (!eta0) throw InfeasibleError("congruence: no eta preserves covering");
  for (Rat eta = *eta0; eta >= dyadic(max_k); eta /= 2) {
    auto dp = largest_dyadic(max_k, [&](const Rat& d) {
      return (d + (ksz + 1) * eta) / (1 - eta) < delta;
    });
    if (!dp) continue;
    auto ds = largest_dyadic(max_k, [&](const Rat& d) {
      return (Rat(cp.U.size()) + 1) * d < eta;
    });
    if (!ds) continue;
    cp.eta = eta;
    cp.delta_prime = *dp;
    cp.delta_second = *ds;
    return cp;
  }
  throw InfeasibleError("congruence: dyadic search exhausted");
}

WindowedTiling congruent_refine(const WindowedTiling& small,
                                const ShiftPoint& x, const CongruenceParams& cp,
                                const ConstructionParams& params_big,
                                const FinSet& window) {
  (void)cp;
  require(small.tiling.tag() == window.tag(), "refine: tag mismatch");
  require(is_disjoint(small.tiling), "refine: small tiling is not disjoint");
  ConstructionTrace tr = construct_dynamical(x, params_big, window);
  WindowedTiling big = disjointify(tr);

  // Materialize the big tiles.
  struct BigTile {
    GroupElement center;
    int shape_idx;
    std::unordered_set<GroupElement, GroupElementHash> cells;
    std::vector<GroupElement> add;
    std::unordered_set<GroupElement, GroupElementHash> remove;
  };
  std::vector<BigTile> bigs;
  std::unordered_map<GroupElement, int, GroupElementHash> cell_owner;
  {
    const auto& shapes = big.tiling.shapes();
    for (std::size_t s = 0; s < shapes.size(); ++s)
      for (const auto& c : big.tiling.centers()[s]) {
        BigTile bt;
        bt.center = c;
        bt.shape_idx = static_cast<int>(s);
        for (const auto& f : shapes[s].elements())
          bt.cells.insert(mul(f, c));
        const int id = static_cast<int>(bigs.size());
        for (const auto& h : bt.cells) cell_owner.emplace(h, id);
        bigs.push_back(std::move(bt));
      }
  }
  std::unordered_set<GroupElement, GroupElementHash> big_det(
      big.determined_window.elements().begin(),
      big.determined_window.elements().end());

  // Assign every small tile by its center; a tile is resolvable only when
  // its center and all its cells lie in the big determined window.
  std::vector<GroupElement> unresolved_cells;
  const auto& sshapes = small.tiling.shapes();
  for (std::size_t s = 0; s < sshapes.size(); ++s)
    for (const auto& c : small.tiling.centers()[s]) {
      std::vector<GroupElement> cells;
      bool resolvable = big_det.count(c) != 0;
      for (const auto& f : sshapes[s].elements()) {
        const GroupElement h = mul(f, c);
        cells.push_back(h);
        if (!big_det.count(h)) resolvable = false;
      }
      if (!resolvable) {
        unresolved_cells.insert(unresolved_cells.end(), cells.begin(),
                                cells.end());
        continue;
      }
      auto owner = cell_owner.find(c);
      if (owner != cell_owner.end()) {
        // Absorb: the whole small tile joins the big tile holding its
        // center; cells it drags in are removed from other big tiles.
        BigTile& host = bigs[static_cast<std::size_t>(owner->second)];
        for (const auto& h : cells) {
          auto o = cell_owner.find(h);
          if (o == cell_owner.end())
            host.add.push_back(h);
          else if (o->second != owner->second) {
            bigs[static_cast<std::size_t>(o->second)].remove.insert(h);
            host.add.push_back(h);
          }
        }
      } else {
        // Expel: the small tile's center is untiled, so its cells leave
        // whatever big tiles they touched.
        for (const auto& h : cells) {
          auto o = cell_owner.find(h);
          if (o != cell_owner.end())
            bigs[static_cast<std::size_t>(o->second)].remove.insert(h);
        }
      }
    }

  std::map<std::vector<GroupElement>, int> shape_ids;
  std::vector<FinSet> shapes;
  std::vector<std::vector<GroupElement>> centers;
  std::vector<GroupElement> kept_centers;
  for (const auto& bt : bigs) {
    std::vector<GroupElement> cells;
    for (const auto& h : bt.cells)
      if (!bt.remove.count(h)) cells.push_back(h);
    for (const auto& h : bt.add)
      if (!bt.remove.count(h)) cells.push_back(h);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    if (cells.empty()) continue;
    const GroupElement cinv = inv(bt.center);
    std::vector<GroupElement> shape_elems;
    shape_elems.reserve(cells.size());
    for (const auto& h : cells) shape_elems.push_back(mul(h, cinv));
    std::sort(shape_elems.begin(), shape_elems.end());
    auto [it, fresh] =
        shape_ids.try_emplace(shape_elems, static_cast<int>(shapes.size()));
    if (fresh) {
      shapes.emplace_back(window.tag(), shape_elems);
      centers.emplace_back();
    }
    centers[static_cast<std::size_t>(it->second)].push_back(bt.center);
    kept_centers.push_back(bt.center);
  }

  // Cells touched by unresolved small tiles fall out of the view.
  std::sort(unresolved_cells.begin(), unresolved_cells.end());
  std::vector<GroupElement> determined;
  for (const auto& h : big.determined_window.elements())
    if (!std::binary_search(unresolved_cells.begin(), unresolved_cells.end(),
                            h))
      determined.push_back(h);

  Quasitiling out(window.tag(), std::move(shapes), std::move(centers));
  for (const auto& c : kept_centers)
    if (auto pv = big.tiling.provenance(c)) out.set_provenance(c, *pv);
  return WindowedTiling{std::move(out),
                        FinSet(window.tag(), std::move(determined))};
}

// ---------------------------------------------------------------------------
// Static baseline
// ---------------------------------------------------------------------------

Quasitiling static_sequential(const FinSet& window,
                              const std::vector<FinSet>& shapes,
                              const Rat& eps) {
  require(!shapes.empty(), "static_sequential: no shapes");
  require(eps > 0 && eps < 1, "static_sequential: eps must lie in (0, 1)");
  for (const auto& s : shapes) {
    require(s.tag() == window.tag(), "static_sequential: tag mismatch");
    require(s.size() > 0, "static_sequential: empty shape");
  }
  std::vector<std::size_t> order(shapes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return shapes[a].size() > shapes[b].size();
  });

  std::unordered_set<GroupElement, GroupElementHash> placed;
  std::vector<std::vector<GroupElement>> centers(shapes.size());
  for (std::size_t oi : order) {
    const FinSet& shape = shapes[oi];
    const Rat cap = eps * Rat(shape.size());
    for (const auto& g : window.elements()) {
      std::int64_t overlap = 0;
      for (const auto& f : shape.elements())
        if (placed.count(mul(f, g))) ++overlap;
      if (Rat(overlap) < cap) {
        centers[oi].push_back(g);
        for (const auto& f : shape.elements()) placed.insert(mul(f, g));
      }
    }
  }
  return Quasitiling(window.tag(), shapes, std::move(centers));
}

}  // namespace qt
