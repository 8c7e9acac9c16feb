#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>

#include "doctest.h"
#include "qtiling/constructor.hpp"
#include "qtiling/errors.hpp"

using namespace qt;

namespace {

GroupElement z(std::int64_t k) { return make_element(Group::Z, k); }

Rat rat_pow(Rat base, int e) {
  Rat out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

struct ZRun {
  ShiftPoint x;
  ConstructionParams params;
  ConstructionTrace trace;
};

// Seeded Z point, explicit indices (2, 3, 4), eps = 1/2, engine window
// sized like the pipeline: probe + slack for the top shape.
ZRun make_z_run(std::uint64_t seed, int probe = 30) {
  ShiftPoint x =
      ShiftPoint::from_seed(Group::Z, {"a", "b", "c", "d"}, seed);
  FolnerFamily fam{Group::Z};
  FinSet ftilde = box(Group::Z, 4);
  auto cover = std::make_shared<SeparatedCover>(
      build_separated_cover({x}, ftilde, box(Group::Z, probe)));
  auto params = make_params(Rat(1, 2), 1, fam, cover, {2, 3, 4});
  auto trace = construct_dynamical(x, params, box(Group::Z, probe + 10));
  return {std::move(x), std::move(params), std::move(trace)};
}

}  // namespace

TEST_CASE("choose_r on reference values") {
  CHECK(choose_r(Rat(1, 2)) == 3);
  CHECK(choose_r(Rat(1, 4)) == 11);
  CHECK(choose_r(Rat(2, 5)) == 5);
  CHECK(choose_r(Rat(49, 100)) == 3);
  CHECK_THROWS_AS(choose_r(Rat(1)), PreconditionError);
}

TEST_CASE("choose_r is the minimal exponent") {
  for (const Rat& eps : {Rat(1, 2), Rat(1, 3), Rat(2, 5), Rat(9, 10)}) {
    int r = choose_r(eps);
    CHECK(rat_pow(1 - eps / 2, r) < eps);
    if (r > 1) CHECK(rat_pow(1 - eps / 2, r - 1) >= eps);
  }
}

TEST_CASE("level_density_bound reference value") {
  // delta = 0, eps_term = 3/8, q = 3/4:
  // (1 - 3/4) + 3/8 * (1 - 1/4) = 1/4 + 9/32 = 17/32.
  CHECK(level_density_bound(Rat(0), Rat(3, 8), Rat(3, 4)) == Rat(17, 32));
}

TEST_CASE("choose_deltas reference values and maximality") {
  auto deltas = choose_deltas(Rat(1, 2), 3);
  REQUIRE(deltas.size() == 2);
  CHECK(deltas[0] == Rat(1, 64));
  CHECK(deltas[1] == Rat(1, 32));

  // Independent re-evaluation: each delta_j passes the dominance test and
  // the next larger dyadic fails it.
  const Rat eps(1, 2);
  for (int j = 1; j <= 2; ++j) {
    const Rat q = rat_pow(1 - eps / 2, 3 - j);
    const Rat target = level_density_bound(0, 3 * eps / 4, q);
    const Rat d = deltas[static_cast<std::size_t>(j - 1)];
    CHECK(level_density_bound(d, eps, q) >= target);
    CHECK(level_density_bound(2 * d, eps, q) < target);
  }
}

TEST_CASE("choose_shape_indices picks minimal feasible indices") {
  FolnerFamily fam{Group::Z};
  // Defect of box(n) against box(2) is 4/(2n+1); < 1/10 first at n = 20.
  auto idx = choose_shape_indices(fam, 1, {Rat(1, 10)});
  CHECK(idx == std::vector<int>{2, 20});
  // A slack bound just forces strict growth.
  CHECK(choose_shape_indices(fam, 1, {Rat(1)}) == std::vector<int>{2, 3});

  FolnerFamily tiny{Group::Z, 5};
  CHECK_THROWS_AS(choose_shape_indices(tiny, 1, {Rat(1, 100)}),
                  InfeasibleError);
}

TEST_CASE("make_params explicit path records achieved defects") {
  auto run = make_z_run(7);
  const auto& p = run.params;
  CHECK(p.r == 3);
  CHECK(p.indices == std::vector<int>{2, 3, 4});
  CHECK(p.n0 == 1);
  REQUIRE(p.deltas.size() == 2);
  // Achieved defects must beat the recorded deltas strictly.
  CHECK(invariance_defect(p.shape(2), p.shape(1)) < p.deltas[0]);
  CHECK(invariance_defect(p.shape(3), p.shape(1)) < p.deltas[0]);
  CHECK(invariance_defect(p.shape(3), p.shape(2)) < p.deltas[1]);
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("construction is deterministic and internally coherent") {
  auto a = make_z_run(7);
  auto b = make_z_run(7);
  REQUIRE(a.trace.level_count() == 3);
  for (int j = 1; j <= 3; ++j) {
    const auto& la = a.trace.levels[static_cast<std::size_t>(j - 1)];
    const auto& lb = b.trace.levels[static_cast<std::size_t>(j - 1)];
    CHECK(la.centers == lb.centers);
    CHECK(la.unknown == lb.unknown);
    CHECK(std::is_sorted(la.centers.begin(), la.centers.end()));
    // Every definite center reports Yes with its recorded stage.
    for (const auto& [g, stage] : la.centers) {
      int s = -1;
      CHECK(a.trace.center_status(j, g, &s) == Status::Yes);
      CHECK(s == stage);
    }
  }
  // Stage records replay to the same centers per (level, stage).
  for (const auto& rec : a.trace.stage_records) {
    FinSet replay = stage_centers(a.x, rec.level, rec.stage, a.params,
                                  a.trace.window);
    std::vector<GroupElement> added = rec.added;
    std::sort(added.begin(), added.end());
    CHECK(replay.elements() == added);
  }
}

TEST_CASE("hat tiling covers its determined window coherently") {
  auto run = make_z_run(11);
  WindowedTiling hat = run.trace.hat_tiling();
  CHECK_NOTHROW(hat.tiling.validate());
  CHECK(hat.tiling.tile_count() > 0);
  CHECK(!hat.determined_window.empty());
  // Center membership is final on the hat determined window.
  for (const auto& h : hat.determined_window)
    for (int j = 1; j <= 3; ++j)
      CHECK(run.trace.center_status(j, h) != Status::Unknown);
  // Where the full coverage history is resolved, h_status(1, .) is
  // two-valued and matches membership in the union of hat tiles.
  const FinSet uni = hat.tiling.union_of_tiles();
  int resolved = 0;
  for (const auto& h : hat.determined_window) {
    if (!run.trace.fully_resolved(h)) continue;
    ++resolved;
    Status st = run.trace.h_status(1, h);
    CHECK(st != Status::Unknown);
    CHECK((st == Status::Yes) == uni.contains(h));
  }
  CHECK(resolved > 0);
}

TEST_CASE("disjointify yields disjoint tiles preserving the union") {
  auto run = make_z_run(5);
  WindowedTiling hat = run.trace.hat_tiling();
  WindowedTiling dis = disjointify(run.trace);
  CHECK_NOTHROW(dis.tiling.validate());
  CHECK(is_disjoint(dis.tiling));
  CHECK(!dis.determined_window.empty());
  const FinSet hat_union = hat.tiling.union_of_tiles();
  const FinSet dis_union = dis.tiling.union_of_tiles();
  const FinSet a = set_intersection(hat_union, dis.determined_window);
  const FinSet b = set_intersection(dis_union, dis.determined_window);
  CHECK(a.elements() == b.elements());
  // Provenance survives trimming.
  for (const auto& t : dis.tiling.tiles())
    CHECK(dis.tiling.provenance(t.second).has_value());
}

TEST_CASE("derive_congruence_params worked example") {
  auto cp = derive_congruence_params(box(Group::Z, 1), Rat(1, 2), Rat(1, 2),
                                     {box(Group::Z, 1)});
  CHECK(cp.eta == Rat(1, 16));
  CHECK(cp.delta_prime == Rat(1, 8));
  CHECK(cp.delta_second == Rat(1, 128));
  // The constraints the cascade is meant to satisfy, re-checked directly.
  const Rat eps = cp.eps;
  CHECK((1 - eps / 2) * (1 - cp.eta) > 1 - eps);
  const Rat kfac(static_cast<long>(cp.K.size() + 1));
  CHECK((cp.delta_prime + kfac * cp.eta) / (1 - cp.eta) < cp.delta);
  CHECK(Rat(static_cast<long>(cp.U.size() + 1)) * cp.delta_second < cp.eta);
}

TEST_CASE("static_sequential packs a line greedily") {
  Quasitiling T = static_sequential(box(Group::Z, 10), {box(Group::Z, 1)},
                                    Rat(1, 2));
  CHECK_NOTHROW(T.validate());
  REQUIRE(T.centers().size() == 1);
  const auto& cs = T.centers()[0];
  CHECK(cs.size() == 11);
  for (const auto& c : cs) CHECK(c.c[0] % 2 == 0);
}

TEST_CASE("static_sequential prefers larger shapes") {
  Quasitiling T = static_sequential(
      box(Group::Z, 6), {box(Group::Z, 1), box(Group::Z, 2)}, Rat(1, 4));
  CHECK_NOTHROW(T.validate());
  // The big shape is placed first at the smallest candidate.
  bool big_used = !T.centers()[1].empty() || !T.centers()[0].empty();
  CHECK(big_used);
  std::size_t big_idx = T.shapes()[0].size() >= T.shapes()[1].size() ? 0 : 1;
  CHECK(!T.centers()[big_idx].empty());
}
