#pragma once

// Executable checks for the structural properties of the value engines:
// semigroup composition, the small-time generator limit, agreement of the
// PDE value with policy Monte Carlo, and far-field decay for compactly
// supported data.

#include <cstdint>
#include <string>
#include <vector>

#include "sslab/generator.hpp"
#include "sslab/mc_engine.hpp"
#include "sslab/scenarios.hpp"

#include <json.hpp>

namespace sslab {

struct Metric {
  std::string label;
  double value = 0.0;
};

struct VerificationReport {
  std::string name;
  std::vector<Metric> metrics;
  double tolerance = 0.0;
  bool pass = false;

  double metric(const std::string& label) const;
};

void to_json(nlohmann::ordered_json& j, const VerificationReport& r);
void from_json(const nlohmann::json& j, VerificationReport& r);

// sup over interior nodes of |S_{s+t} psi - S_t S_s psi| at the base
// resolution, with the same defect after one grid refinement. PASS when
// the base defect is within tolerance and refinement improves it by at
// least 1.5x (defects at rounding noise are accepted as converged).
VerificationReport semigroup_compose_check(const Scenario& scenario, PsiTag tag, double s,
                                           double t, const SchemeConfig& config = {});

// Difference quotients (S_t phi - phi)/t fitted linearly in t; the
// intercept must match the pointwise generator within 5% relative.
VerificationReport generator_limit_check(const Scenario& scenario, const TestFunction& phi,
                                         const Vec& x, const std::vector<double>& t_values,
                                         const SchemeConfig& config = {});

// PDE value vs Monte Carlo under the extracted policy, plus the best
// constant policy as a lower certificate.
VerificationReport representation_cross_check(const Scenario& scenario, PsiTag tag, const Vec& x0,
                                               double horizon, long n_paths, std::uint64_t seed,
                                               const SchemeConfig& config = {});

// Far-field decay of the evolved compactly supported bump: |u| must be
// nonincreasing along each supplied direction chain and small at the box
// edge. The tag must be compactly supported.
VerificationReport feller_decay_check(const Scenario& scenario, PsiTag tag, double horizon,
                                      const std::vector<Vec>& x_far,
                                      const SchemeConfig& config = {});

}  // namespace sslab
