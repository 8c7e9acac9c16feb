#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qtiling/constructor.hpp"

namespace qt {

enum class CheckStatus : std::uint8_t { Pass, Fail, Inconclusive };

std::string check_status_name(CheckStatus s);

// Outcome of one empirical check.  Inconclusive means the window offered
// no position on which the property could be decided; it never hides a
// counterexample.
struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Inconclusive;
  std::vector<std::pair<std::string, std::string>> metrics;
  std::string note;  // counterexample or explanation

  bool passed() const { return status == CheckStatus::Pass; }
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
  bool any_failed() const;
};

// C(gx) = C(x) g^{-1}: statuses (and stages) at h for the shifted point
// match those at h*g for the base point, wherever both are definite.
CheckResult check_equivariance(const ShiftPoint& x, const GroupElement& g,
                               const ConstructionParams& params,
                               const FinSet& window);

// Points agreeing on the recorded query support of the run on x yield
// byte-identical center statuses on B.  If y diverges inside the support
// no assertion is made; the divergence is recorded.
CheckResult check_continuity(const ShiftPoint& x, const ShiftPoint& y,
                             const FinSet& B, const ConstructionParams& params,
                             const FinSet& window);

// Density of definite level centers' material: over translates F_j g
// (g in translate_window) whose membership history is fully determined,
// the covered fraction strictly exceeds eps.
CheckResult check_stage_density(const ConstructionTrace& trace, int level,
                                const FinSet& translate_window);

// Covered fraction of each fully determined translate F_test g strictly
// exceeds 1 - eps.
CheckResult check_final_covering(const WindowedTiling& tiling,
                                 const FinSet& f_test,
                                 const FinSet& translate_window,
                                 const Rat& eps);

// Every small tile inside the refined view's determined window is either
// contained in exactly one refined tile or disjoint from all of them.
// Tiles straddling the window boundary are excluded and counted.
CheckResult check_congruence(const WindowedTiling& small,
                             const WindowedTiling& refined);

// Exact eps-disjointness decision plus witness re-validation.
CheckResult check_eps_disjoint(const Quasitiling& tiling, const Rat& eps);

}  // namespace qt
