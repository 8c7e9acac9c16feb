#include "qtiling/folner.hpp"

#include <unordered_set>

namespace qt {

Rat invariance_defect(const FinSet& T, const FinSet& K) {
  if (T.empty()) throw PreconditionError("invariance_defect: empty T");
  if (T.tag() != K.tag())
    throw TagMismatchError("invariance_defect: mixed group tags");
  FinSet KT = set_product(K, T);
  FinSet sd = set_symdiff(KT, T);
  return Rat(Int(sd.size()), Int(T.size()));
}

bool is_invariant(const FinSet& T, const FinSet& K, const Rat& eps) {
  if (!(eps > 0 && eps < 1))
    throw PreconditionError("is_invariant: eps must be in (0,1)");
  return invariance_defect(T, K) < eps;
}

Rat perturbation_delta(const FinSet& K, const Rat& eps, const Rat& delta0,
                       int max_k) {
  if (!(delta0 < eps))
    throw InfeasibleError("perturbation_delta: delta0 must be below eps");
  Rat kfac(Int(K.size() + 1));
  auto ok = [&](const Rat& d) {
    return d < 1 && (delta0 + kfac * d) / (Rat(1) - d) < eps;
  };
  auto d = largest_dyadic(max_k, ok);
  if (!d)
    throw InfeasibleError("perturbation_delta: no dyadic delta qualifies");
  return *d;
}

Rat banach_density_window(const FinSet& S, const FinSet& F,
                          const FinSet& window) {
  if (F.empty() || window.empty())
    throw PreconditionError("banach_density_window: empty F or window");
  std::unordered_set<GroupElement, GroupElementHash> in_s(S.begin(), S.end());
  std::size_t best = F.size() + 1;
  for (const auto& g : window) {
    std::size_t hit = 0;
    for (const auto& f : F)
      if (in_s.count(mul(f, g))) ++hit;
    if (hit < best) best = hit;
    if (best == 0) break;
  }
  return Rat(Int(best), Int(F.size()));
}

}  // namespace qt
