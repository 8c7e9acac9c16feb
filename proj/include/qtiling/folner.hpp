#pragma once

#include "qtiling/group.hpp"
#include "qtiling/rational.hpp"

namespace qt {

// Indexed family of symmetric Folner sets containing the unit, realized by
// box().  max_index bounds any search over the family.
struct FolnerFamily {
  Group tag = Group::Z;
  int max_index = 4096;

  FinSet set(int n) const { return box(tag, n); }
};

// |KT symdiff T| / |T| as an exact rational.
Rat invariance_defect(const FinSet& T, const FinSet& K);

// invariance_defect(T, K) < eps, strict.  With e in K this coincides with
// |KT| < (1+eps)|T|.
bool is_invariant(const FinSet& T, const FinSet& K, const Rat& eps);

// Largest dyadic delta such that a (K,delta0)-invariant T stays
// (K,eps)-invariant after perturbing up to delta|T| elements, via the
// sufficient bound (delta0 + (|K|+1) delta) / (1 - delta) < eps.
Rat perturbation_delta(const FinSet& K, const Rat& eps, const Rat& delta0,
                       int max_k = 40);

// min over g in window of |S cap Fg| / |F|.  An upper bound on the true
// lower Banach density D_F(S) (infimum over fewer translates).
Rat banach_density_window(const FinSet& S, const FinSet& F,
                          const FinSet& window);

}  // namespace qt
