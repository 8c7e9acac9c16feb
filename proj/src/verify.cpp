#include "qtiling/verify.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "qtiling/errors.hpp"

namespace qt {

std::string check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed(); });
}

bool VerificationReport::any_failed() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status == CheckStatus::Fail;
  });
}

namespace {

void add_metric(CheckResult& r, const std::string& key, const Rat& v) {
  r.metrics.emplace_back(key, rat_to_string(v));
}

void add_metric(CheckResult& r, const std::string& key, std::int64_t v) {
  r.metrics.emplace_back(key, std::to_string(v));
}

}  // namespace

CheckResult check_equivariance(const ShiftPoint& x, const GroupElement& g,
                               const ConstructionParams& params,
                               const FinSet& window) {
  CheckResult res;
  res.name = "equivariance";
  const ConstructionTrace base = construct_dynamical(x, params, window);
  const ConstructionTrace shifted =
      construct_dynamical(x.shifted(g), params, window);
  std::int64_t compared = 0;
  for (const auto& h : window.elements()) {
    const GroupElement hg = mul(h, g);
    if (!window.contains(hg)) continue;
    for (int j = 1; j <= params.r; ++j) {
      int stage_s = 0, stage_b = 0;
      const Status ss = shifted.center_status(j, h, &stage_s);
      const Status sb = base.center_status(j, hg, &stage_b);
      if (ss == Status::Unknown || sb == Status::Unknown) continue;
      ++compared;
      if (ss != sb || (ss == Status::Yes && stage_s != stage_b)) {
        res.status = CheckStatus::Fail;
        res.note = "status mismatch at h=" + to_string(h) +
                   " level=" + std::to_string(j);
        add_metric(res, "compared", compared);
        return res;
      }
    }
  }
  add_metric(res, "compared", compared);
  res.status = compared > 0 ? CheckStatus::Pass : CheckStatus::Inconclusive;
  if (compared == 0) res.note = "no commonly determined positions";
  return res;
}

CheckResult check_continuity(const ShiftPoint& x, const ShiftPoint& y,
                             const FinSet& B, const ConstructionParams& params,
                             const FinSet& window) {
  CheckResult res;
  res.name = "continuity";
  const ConstructionTrace tx = construct_dynamical(x, params, window);
  for (const auto& p : tx.query_support.elements())
    if (x.eval(p) != y.eval(p)) {
      res.status = CheckStatus::Inconclusive;
      res.note = "points diverge inside the query support at " + to_string(p) +
                 "; no assertion made";
      return res;
    }
  const ConstructionTrace ty = construct_dynamical(y, params, window);
  std::int64_t compared = 0;
  for (const auto& b : B.elements()) {
    for (int j = 1; j <= params.r; ++j) {
      int st_x = 0, st_y = 0;
      const Status sx = tx.center_status(j, b, &st_x);
      const Status sy = ty.center_status(j, b, &st_y);
      if (sx == Status::Unknown && sy == Status::Unknown) continue;
      ++compared;
      if (sx != sy || (sx == Status::Yes && st_x != st_y)) {
        res.status = CheckStatus::Fail;
        res.note = "encodings differ at " + to_string(b) +
                   " level=" + std::to_string(j);
        add_metric(res, "compared", compared);
        return res;
      }
    }
  }
  add_metric(res, "compared", compared);
  res.status = compared > 0 ? CheckStatus::Pass : CheckStatus::Inconclusive;
  if (compared == 0) res.note = "nothing determined on B";
  return res;
}

CheckResult check_stage_density(const ConstructionTrace& trace, int level,
                                const FinSet& translate_window) {
  CheckResult res;
  res.name = "stage-density-" + std::to_string(level);
  if (level < 1 || level > trace.level_count())
    throw PreconditionError("check_stage_density: bad level");
  const FinSet& shape =
      trace.levels[static_cast<std::size_t>(level - 1)].shape;
  const Rat eps = trace.eps;
  std::int64_t eligible = 0;
  std::optional<Rat> min_ratio;
  for (const auto& g : translate_window.elements()) {
    std::int64_t covered = 0;
    bool determined = true;
    for (const auto& f : shape.elements()) {
      switch (trace.h_status(level, mul(f, g))) {
        case Status::Yes:
          ++covered;
          break;
        case Status::No:
          break;
        case Status::Unknown:
          determined = false;
          break;
      }
      if (!determined) break;
    }
    if (!determined) continue;
    ++eligible;
    const Rat ratio = Rat(covered) / Rat(shape.size());
    if (!min_ratio || ratio < *min_ratio) min_ratio = ratio;
    if (!(ratio > eps)) {
      res.status = CheckStatus::Fail;
      res.note = "translate at " + to_string(g) + " covered only " +
                 rat_to_string(ratio);
      add_metric(res, "eligible", eligible);
      add_metric(res, "min_ratio", ratio);
      return res;
    }
  }
  add_metric(res, "eligible", eligible);
  if (min_ratio) add_metric(res, "min_ratio", *min_ratio);
  res.status = eligible > 0 ? CheckStatus::Pass : CheckStatus::Inconclusive;
  if (eligible == 0) res.note = "no fully determined translate";
  return res;
}

CheckResult check_final_covering(const WindowedTiling& tiling,
                                 const FinSet& f_test,
                                 const FinSet& translate_window,
                                 const Rat& eps) {
  CheckResult res;
  res.name = "final-covering";
  std::unordered_set<GroupElement, GroupElementHash> cells;
  {
    const FinSet u = tiling.tiling.union_of_tiles();
    cells.insert(u.elements().begin(), u.elements().end());
  }
  std::unordered_set<GroupElement, GroupElementHash> det(
      tiling.determined_window.elements().begin(),
      tiling.determined_window.elements().end());
  const Rat target = 1 - eps;
  std::int64_t eligible = 0;
  std::optional<Rat> min_ratio;
  for (const auto& g : translate_window.elements()) {
    std::int64_t covered = 0;
    bool determined = true;
    for (const auto& f : f_test.elements()) {
      const GroupElement h = mul(f, g);
      if (!det.count(h)) {
        determined = false;
        break;
      }
      if (cells.count(h)) ++covered;
    }
    if (!determined) continue;
    ++eligible;
    const Rat ratio = Rat(covered) / Rat(f_test.size());
    if (!min_ratio || ratio < *min_ratio) min_ratio = ratio;
    if (!(ratio > target)) {
      res.status = CheckStatus::Fail;
      res.note = "translate at " + to_string(g) + " covered only " +
                 rat_to_string(ratio);
      add_metric(res, "eligible", eligible);
      add_metric(res, "min_ratio", ratio);
      return res;
    }
  }
  add_metric(res, "eligible", eligible);
  if (min_ratio) add_metric(res, "min_ratio", *min_ratio);
  res.status = eligible > 0 ? CheckStatus::Pass : CheckStatus::Inconclusive;
  if (eligible == 0) res.note = "no fully determined translate";
  return res;
}

CheckResult check_congruence(const WindowedTiling& small,
                             const WindowedTiling& refined) {
  CheckResult res;
  res.name = "congruence";
  std::unordered_map<GroupElement, int, GroupElementHash> owner;
  {
    const auto& shapes = refined.tiling.shapes();
    int id = 0;
    for (std::size_t s = 0; s < shapes.size(); ++s)
      for (const auto& c : refined.tiling.centers()[s]) {
        for (const auto& f : shapes[s].elements()) owner.emplace(mul(f, c), id);
        ++id;
      }
  }
  std::unordered_set<GroupElement, GroupElementHash> det(
      refined.determined_window.elements().begin(),
      refined.determined_window.elements().end());
  std::int64_t checked = 0, boundary = 0;
  const auto& sshapes = small.tiling.shapes();
  for (std::size_t s = 0; s < sshapes.size(); ++s)
    for (const auto& c : small.tiling.centers()[s]) {
      std::vector<GroupElement> cells;
      bool inside = true;
      for (const auto& f : sshapes[s].elements()) {
        const GroupElement h = mul(f, c);
        cells.push_back(h);
        if (!det.count(h)) inside = false;
      }
      if (!inside) {
        ++boundary;
        continue;
      }
      ++checked;
      std::optional<int> host;
      std::int64_t owned = 0;
      bool mixed = false;
      for (const auto& h : cells) {
        auto it = owner.find(h);
        if (it == owner.end()) continue;
        ++owned;
        if (!host)
          host = it->second;
        else if (*host != it->second)
          mixed = true;
      }
      const bool contained =
          host && !mixed && owned == static_cast<std::int64_t>(cells.size());
      const bool disjoint = owned == 0;
      if (!contained && !disjoint) {
        res.status = CheckStatus::Fail;
        res.note = "small tile at " + to_string(c) +
                   " straddles refined tiles (" + std::to_string(owned) + "/" +
                   std::to_string(cells.size()) + " cells owned)";
        add_metric(res, "checked", checked);
        add_metric(res, "boundary_excluded", boundary);
        return res;
      }
    }
  add_metric(res, "checked", checked);
  add_metric(res, "boundary_excluded", boundary);
  res.status = checked > 0 ? CheckStatus::Pass : CheckStatus::Inconclusive;
  if (checked == 0) res.note = "no small tile fully inside the window";
  return res;
}

CheckResult check_eps_disjoint(const Quasitiling& tiling, const Rat& eps) {
  CheckResult res;
  res.name = "eps-disjoint";
  const FlowCheckResult flow = eps_disjoint_flow_check(tiling, eps);
  add_metric(res, "tiles", static_cast<std::int64_t>(tiling.tile_count()));
  if (!flow.feasible) {
    res.status = CheckStatus::Fail;
    res.note = "no eps-disjointness witness exists";
    return res;
  }
  if (!flow.witness || !check_witness(tiling, *flow.witness, eps)) {
    res.status = CheckStatus::Fail;
    res.note = "flow witness failed re-validation";
    return res;
  }
  res.status = CheckStatus::Pass;
  return res;
}

}  // namespace qt
