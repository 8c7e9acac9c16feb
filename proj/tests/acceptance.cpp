// Acceptance battery: one pass/fail line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "qtiling/io.hpp"

using namespace qt;

namespace {

int failures = 0;

bool expect(bool ok, const std::string& what) {
  if (!ok) std::cout << "    FAIL: " << what << "\n";
  return ok;
}

void report(int n, const std::string& label, bool ok) {
  std::cout << "criterion " << n << " (" << label << "): "
            << (ok ? "pass" : "FAIL") << "\n";
  if (!ok) ++failures;
}

Rat rat_pow(Rat base, int e) {
  Rat out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

GroupElement z(std::int64_t k) { return make_element(Group::Z, k); }

Config base_config(Group g, std::uint64_t seed, const Rat& eps,
                   std::vector<int> indices, int window_radius) {
  Config cfg;
  cfg.group = g;
  cfg.alphabet = {"a", "b", "c", "d"};
  cfg.seed = seed;
  cfg.eps = eps;
  cfg.shape_indices = std::move(indices);
  cfg.window_radius = window_radius;
  return cfg;
}

std::optional<Rat> metric(const CheckResult& r, const std::string& key) {
  for (const auto& [k, v] : r.metrics)
    if (k == key) return rat_from_string(v);
  return std::nullopt;
}

// ---------------------------------------------------------------- 1

bool criterion1() {
  bool ok = expect(choose_r(Rat(1, 2)) == 3, "choose_r(1/2) != 3");
  ok &= expect(choose_r(Rat(1, 4)) == 11, "choose_r(1/4) != 11");

  auto deltas = choose_deltas(Rat(1, 2), 3);
  ok &= expect(deltas.size() == 2, "delta count");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    // Dyadic: numerator 1, denominator a power of two.
    Rat d = deltas[i];
    ok &= expect(boost::multiprecision::numerator(d) == 1 &&
                     (boost::multiprecision::denominator(d) &
                      (boost::multiprecision::denominator(d) - 1)) == 0,
                 "delta not dyadic");
    // Independent re-evaluation of the level bound at this delta.
    const Rat eps(1, 2);
    const Rat q = rat_pow(1 - eps / 2, 3 - static_cast<int>(i) - 1);
    const Rat target = level_density_bound(0, 3 * eps / 4, q);
    ok &= expect(level_density_bound(d, eps, q) >= target,
                 "delta fails the level bound");
    ok &= expect(level_density_bound(2 * d, eps, q) < target,
                 "delta not maximal");
  }

  FolnerFamily fam{Group::Z};
  auto idx = choose_shape_indices(fam, 1, {Rat(1, 10)});
  ok &= expect(idx.size() == 2 && idx[0] == 2, "n_1 != 2");
  // Defect of box(n) against box(2) is 4/(2n+1) < 1/10 first at n = 20.
  ok &= expect(idx.size() == 2 && idx[1] == 20, "n_2 != 20");
  ok &= expect(Rat(4, 2 * 20 + 1) < Rat(1, 10) &&
                   !(Rat(4, 2 * 19 + 1) < Rat(1, 10)),
               "defect formula sanity");
  return ok;
}

// ---------------------------------------------------------------- 2

bool criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  Config cfg = base_config(Group::Z2, 11, Rat(1, 2), {2, 4, 9}, 60);
  PipelineResult run = run_tile_pipeline(cfg);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::cout << "    plane run: " << run.dump.tiling.tiling.tile_count()
            << " tiles, determined "
            << run.dump.tiling.determined_window.size() << ", " << secs
            << " s\n";
  bool ok = expect(secs < 120.0, "construction exceeded 120 s");

  const Quasitiling& T = run.dump.tiling.tiling;
  const std::size_t tiles = T.tile_count();
  ok &= expect(tiles > 0 && tiles <= 300, "tile count outside (0, 300]");

  auto flow = eps_disjoint_flow_check(T, Rat(1, 2));
  ok &= expect(flow.feasible && flow.witness.has_value(),
               "flow check infeasible");
  if (flow.witness)
    ok &= expect(check_witness(T, *flow.witness, Rat(1, 2)),
                 "witness fails revalidation");

  const FinSet translates = box(Group::Z2, 40);
  for (int j = 1; j <= run.params.r; ++j) {
    CheckResult r = check_stage_density(run.trace, j, translates);
    ok &= expect(r.passed(), "stage density level " + std::to_string(j) +
                                 ": " + r.note);
    auto m = metric(r, "min_ratio");
    ok &= expect(m.has_value() && *m > Rat(1, 2),
                 "stage density ratio not an exact rational > 1/2");
  }

  CheckResult fin = check_final_covering(run.dump.tiling, box(Group::Z2, 9),
                                         translates, Rat(1, 2));
  ok &= expect(fin.passed(), "final covering: " + fin.note);
  auto m = metric(fin, "min_ratio");
  ok &= expect(m.has_value() && *m > Rat(1, 2),
               "covering ratio not an exact rational > 1/2");
  return ok;
}

// ---------------------------------------------------------------- 3

bool criterion3() {
  bool ok = true;
  struct Case {
    Group g;
    Rat eps;
    std::vector<int> indices;
    int window;
  };
  const std::vector<Case> cases = {
      {Group::Z, Rat(1, 2), {2, 3, 4}, 40},
      {Group::Z, Rat(2, 5), {2, 3, 4, 5, 6}, 40},
      {Group::Z2, Rat(1, 2), {1, 2, 3}, 8},
      {Group::Z2, Rat(2, 5), {1, 2, 3, 4, 5}, 8},
  };
  for (const auto& c : cases) {
    Config cfg = base_config(c.g, 7, c.eps, c.indices, c.window);
    cfg.do_disjointify = false;  // dump the hat tiling; disjointify here
    PipelineResult run = run_tile_pipeline(cfg);
    WindowedTiling hat = run.trace.hat_tiling();
    WindowedTiling dis = disjointify(run.trace);
    const std::string tag =
        group_name(c.g) + " eps=" + rat_to_string(c.eps);
    ok &= expect(dis.tiling.tile_count() > 0, tag + ": no tiles");
    ok &= expect(is_disjoint(dis.tiling), tag + ": tiles overlap");
    const FinSet hat_u =
        set_intersection(hat.tiling.union_of_tiles(), dis.determined_window);
    const FinSet dis_u =
        set_intersection(dis.tiling.union_of_tiles(), dis.determined_window);
    ok &= expect(hat_u.elements() == dis_u.elements(),
                 tag + ": union changed on the determined window");
  }
  return ok;
}

// ---------------------------------------------------------------- 4

bool criterion4() {
  ShiftPoint x =
      ShiftPoint::from_seed(Group::Z2, {"a", "b", "c", "d"}, 13);
  FolnerFamily fam{Group::Z2};
  const FinSet window = box(Group::Z2, 22);
  auto cover = std::make_shared<SeparatedCover>(build_separated_cover(
      {x}, box(Group::Z2, 3), box(Group::Z2, 16)));
  auto params = make_params(Rat(1, 2), 0, fam, cover, {1, 2, 3});
  const ConstructionTrace base = construct_dynamical(x, params, window);

  bool ok = true;
  // 25 shifts from box(3), skipping the identity.
  std::vector<GroupElement> shifts;
  for (const auto& g : box(Group::Z2, 3))
    if (!(g == identity(Group::Z2)) &&
        shifts.size() < 25)
      shifts.push_back(g);
  for (const auto& g : shifts) {
    const ConstructionTrace shifted =
        construct_dynamical(x.shifted(g), params, window);
    std::int64_t compared = 0;
    bool match = true;
    for (const auto& h : window.elements()) {
      const GroupElement hg = mul(h, g);
      if (!window.contains(hg)) continue;
      for (int j = 1; j <= params.r; ++j) {
        int ss = 0, sb = 0;
        const Status a = shifted.center_status(j, h, &ss);
        const Status b = base.center_status(j, hg, &sb);
        if (a == Status::Unknown || b == Status::Unknown) continue;
        ++compared;
        if (a != b || (a == Status::Yes && ss != sb)) match = false;
      }
    }
    ok &= expect(match && compared > 0,
                 "equivariance at g=" + to_string(g) + " (compared " +
                     std::to_string(compared) + ")");
  }

  // 10 perturbations strictly outside the recorded query support must
  // leave the run byte-identical on B.
  const FinSet B = box(Group::Z2, 8);
  const FinSet support = base.query_support;
  std::int64_t far = 0;
  for (const auto& g : support)
    far = std::max({far, std::abs(g.c[0]), std::abs(g.c[1])});
  std::unordered_map<GroupElement, Symbol, GroupElementHash> frozen;
  for (const auto& g : support) frozen[g] = x.eval(g);
  for (int k = 1; k <= 10; ++k) {
    auto assign = frozen;
    assign[make_element(Group::Z2, far + 10 + k, -far - 10 - k)] =
        static_cast<Symbol>(k % 4);
    ShiftPoint y = ShiftPoint::from_pattern(Group::Z2, {"a", "b", "c", "d"},
                                            0, assign);
    bool agrees = true;
    for (const auto& p : support)
      if (y.eval(p) != x.eval(p)) agrees = false;
    if (!expect(agrees, "perturbation leaked into the support")) {
      ok = false;
      continue;
    }
    const ConstructionTrace ty = construct_dynamical(y, params, window);
    std::ostringstream bytes_x, bytes_y;
    for (const auto& b : B.elements())
      for (int j = 1; j <= params.r; ++j) {
        int sx = 0, sy = 0;
        bytes_x << static_cast<int>(base.center_status(j, b, &sx)) << ':'
                << sx << ';';
        bytes_y << static_cast<int>(ty.center_status(j, b, &sy)) << ':' << sy
                << ';';
      }
    ok &= expect(bytes_x.str() == bytes_y.str(),
                 "continuity perturbation " + std::to_string(k));
  }
  return ok;
}

// ---------------------------------------------------------------- 5

bool criterion5() {
  ShiftPoint x = ShiftPoint::from_seed(Group::Z, {"a", "b", "c", "d"}, 7);
  FolnerFamily fam{Group::Z};

  // Small tiling: disjointified eps = 1/2 run with shapes box(2..4).
  auto cover_s = std::make_shared<SeparatedCover>(build_separated_cover(
      {x}, box(Group::Z, 4), box(Group::Z, 130)));
  auto params_s = make_params(Rat(1, 2), 1, fam, cover_s, {2, 3, 4});
  ConstructionTrace tr_s =
      construct_dynamical(x, params_s, box(Group::Z, 140));
  WindowedTiling small = disjointify(tr_s);
  bool ok = expect(small.tiling.tile_count() > 0, "small tiling empty");

  // Big tiling parameters: shapes box(8..18).
  auto cover_b = std::make_shared<SeparatedCover>(build_separated_cover(
      {x}, box(Group::Z, 18), box(Group::Z, 160)));
  auto params_b = make_params(Rat(1, 2), 7, fam, cover_b, {8, 12, 18});

  const FinSet K = box(Group::Z, 1);
  CongruenceParams cp = derive_congruence_params(
      K, Rat(1, 4), Rat(1, 2),
      std::vector<FinSet>(params_s.shapes.begin(), params_s.shapes.end()));
  const FinSet window = box(Group::Z, 200);
  WindowedTiling refined = congruent_refine(small, x, cp, params_b, window);
  ok &= expect(refined.tiling.tile_count() > 0, "refined tiling empty");

  // Interior small tiles: contained in exactly one refined tile or
  // disjoint from all; boundary tiles excluded by the check.
  CheckResult cong = check_congruence(small, refined);
  ok &= expect(cong.passed(), "congruence: " + cong.note);

  // Every refined shape is (K, 1/4)-invariant.
  for (const auto& s : refined.tiling.shapes())
    ok &= expect(is_invariant(s, K, Rat(1, 4)),
                 "refined shape of size " + std::to_string(s.size()) +
                     " not (K, 1/4)-invariant");

  // Sandwich against the deterministic big tiling, with symmetric U.
  ConstructionTrace tr_b = construct_dynamical(x, params_b, window);
  WindowedTiling big = disjointify(tr_b);
  std::map<GroupElement, FinSet> big_tiles;
  for (const auto& t : big.tiling.tiles())
    big_tiles.emplace(t.second, big.tiling.tile_set(t));
  const FinSet U = cp.U;
  const FinSet U_inv = set_inverse(U);
  ok &= expect(U_inv.elements() == U.elements(), "U not symmetric");
  int matched = 0;
  for (const auto& t : refined.tiling.tiles()) {
    auto it = big_tiles.find(t.second);
    if (it == big_tiles.end()) continue;
    ++matched;
    const FinSet ref = refined.tiling.tile_set(t);
    const FinSet& raw = it->second;
    // U-interior of the big tile sits inside the refined tile.
    std::vector<GroupElement> interior;
    for (const auto& h : raw)
      if (is_subset(set_product(U, FinSet(Group::Z, {h})), raw))
        interior.push_back(h);
    ok &= expect(is_subset(FinSet(Group::Z, interior), ref),
                 "U-interior escapes the refined tile at " +
                     to_string(t.second));
    ok &= expect(is_subset(ref, set_product(U, raw)),
                 "refined tile escapes U * big tile at " +
                     to_string(t.second));
  }
  ok &= expect(matched > 0, "no refined tile matches a big tile");

  CheckResult fin = check_final_covering(refined, box(Group::Z, 18),
                                         box(Group::Z, 80), Rat(1, 2));
  ok &= expect(fin.passed(), "windowed covering: " + fin.note);
  return ok;
}

// ---------------------------------------------------------------- 6

bool brute_force_eps_disjoint(const Quasitiling& T, const Rat& eps) {
  auto ts = T.tiles();
  std::vector<std::vector<GroupElement>> cells;
  std::vector<std::size_t> demand;
  for (const auto& t : ts) {
    const FinSet s = T.tile_set(t);
    cells.push_back(s.elements());
    demand.push_back(static_cast<std::size_t>(
        rat_ceil((Rat(1) - eps) * Rat(static_cast<long>(s.size())))));
  }
  std::set<GroupElement> used;
  std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
    if (i == cells.size()) return true;
    std::vector<GroupElement> avail;
    for (const auto& g : cells[i])
      if (!used.count(g)) avail.push_back(g);
    if (avail.size() < demand[i]) return false;
    std::vector<std::size_t> pick;
    std::function<bool(std::size_t)> choose = [&](std::size_t from) -> bool {
      if (pick.size() == demand[i]) {
        for (auto p : pick) used.insert(avail[p]);
        if (place(i + 1)) return true;
        for (auto p : pick) used.erase(avail[p]);
        return false;
      }
      for (std::size_t j = from; j < avail.size(); ++j) {
        pick.push_back(j);
        if (choose(j + 1)) return true;
        pick.pop_back();
      }
      return false;
    };
    return choose(0);
  };
  return place(0);
}

bool criterion6() {
  bool ok = true;
  std::mt19937_64 rng(99);
  const std::vector<Rat> eps_pool = {Rat(1, 4), Rat(1, 3), Rat(1, 2),
                                     Rat(2, 3), Rat(3, 4)};
  int agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    int ntiles = 1 + static_cast<int>(rng() % 4);
    std::vector<FinSet> shapes;
    std::vector<std::vector<GroupElement>> centers;
    for (int i = 0; i < ntiles; ++i) {
      std::vector<GroupElement> ks;
      for (std::int64_t k = -3; k <= 3; ++k)
        if (rng() % 2) ks.push_back(z(k));
      if (ks.empty()) ks.push_back(z(0));
      shapes.emplace_back(Group::Z, std::move(ks));
      centers.push_back({z(i)});
    }
    Quasitiling T(Group::Z, shapes, centers);
    if (T.union_of_tiles().size() > 12) continue;
    Rat eps = eps_pool[rng() % eps_pool.size()];
    auto r = eps_disjoint_flow_check(T, eps);
    if (r.feasible != brute_force_eps_disjoint(T, eps)) {
      ok = expect(false, "flow/brute-force disagreement at trial " +
                             std::to_string(trial));
      continue;
    }
    if (r.feasible && !check_witness(T, *r.witness, eps))
      ok = expect(false, "bad witness at trial " + std::to_string(trial));
    ++agree;
  }
  ok &= expect(agree >= 190, "too few comparable instances");

  // Windowed density against a period oracle on periodic subsets.
  for (Group g : {Group::Z, Group::Z2}) {
    const int rank = group_rank(g);
    for (int trial = 0; trial < 25; ++trial) {
      const std::int64_t p = 2 + static_cast<std::int64_t>(rng() % 6);
      std::set<std::int64_t> residues;  // flattened residue keys
      std::vector<std::vector<bool>> cell(
          static_cast<std::size_t>(p),
          std::vector<bool>(static_cast<std::size_t>(rank == 2 ? p : 1)));
      bool any = false;
      for (auto& row : cell)
        for (std::size_t j = 0; j < row.size(); ++j) {
          row[j] = rng() % 2;
          any |= row[j];
        }
      if (!any) cell[0][0] = true;
      auto member = [&](std::int64_t a, std::int64_t b) {
        auto m = [&](std::int64_t v) {
          return static_cast<std::size_t>(((v % p) + p) % p);
        };
        return static_cast<bool>(cell[m(a)][rank == 2 ? m(b) : 0]);
      };
      const int W = 12, m = 1, L = W + m;
      std::vector<GroupElement> sv;
      for (const auto& h : box(g, L))
        if (member(h.c[0], h.c[1])) sv.push_back(h);
      const FinSet S(g, std::move(sv));
      const FinSet F = box(g, m);
      const Rat got = banach_density_window(S, F, box(g, W));
      // Oracle: minimize |S cap F h| / |F| over one full period of h.
      Rat best(2);
      for (std::int64_t a = 0; a < p; ++a)
        for (std::int64_t b = 0; b < (rank == 2 ? p : 1); ++b) {
          std::int64_t hits = 0;
          for (const auto& f : F)
            if (member(f.c[0] + a, f.c[1] + b)) ++hits;
          best = std::min(best, Rat(hits, static_cast<std::int64_t>(F.size())));
        }
      ok &= expect(got == best,
                   group_name(g) + " density mismatch at trial " +
                       std::to_string(trial) + ": got " + rat_to_string(got) +
                       " want " + rat_to_string(best));
    }
  }
  return ok;
}

// ---------------------------------------------------------------- 7

bool criterion7() {
  bool ok = true;
  const char* cli = std::getenv("QTILING_CLI");
  if (!expect(cli != nullptr, "QTILING_CLI not set")) return false;
  {
    std::ofstream cfg("acc7.cfg", std::ios::binary);
    cfg << "group = Z\nalphabet = a,b,c,d\npoint = seed:7\neps = 1/2\n"
           "shape_indices = 2,3,4\nwindow_radius = 30\n";
  }
  auto run = [&](const std::string& out) {
    std::string cmd = std::string(cli) + " tile --config acc7.cfg --out " +
                      out + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str())) == 0;
  };
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  ok &= expect(run("acc7_a.dump") && run("acc7_b.dump"), "tile run failed");
  const std::string a = slurp("acc7_a.dump"), b = slurp("acc7_b.dump");
  ok &= expect(!a.empty() && a == b, "dumps differ between identical runs");

  // Heisenberg arithmetic against random associativity/inverse triples.
  std::mt19937_64 rng(7);
  auto rnd = [&]() {
    return make_element(Group::Heisenberg,
                        static_cast<std::int64_t>(rng() % 101) - 50,
                        static_cast<std::int64_t>(rng() % 101) - 50,
                        static_cast<std::int64_t>(rng() % 101) - 50);
  };
  const GroupElement e = identity(Group::Heisenberg);
  for (int i = 0; i < 10000; ++i) {
    const GroupElement a3 = rnd(), b3 = rnd(), c3 = rnd();
    if (!(mul(mul(a3, b3), c3) == mul(a3, mul(b3, c3))) ||
        !(mul(a3, inv(a3)) == e) || !(mul(inv(a3), a3) == e)) {
      ok = expect(false, "Heisenberg identity fails at triple " +
                             std::to_string(i));
      break;
    }
  }
  return ok;
}

}  // namespace

int main() {
  report(1, "parameter formulas", criterion1());
  report(2, "plane construction budget", criterion2());
  report(3, "disjointification", criterion3());
  report(4, "equivariance and continuity", criterion4());
  report(5, "congruent refinement", criterion5());
  report(6, "flow and density oracles", criterion6());
  report(7, "determinism and arithmetic", criterion7());
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
