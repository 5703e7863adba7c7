#pragma once

// Pointwise HJB generator of the controlled family: single-control
// evaluation, the sup over controls with argmax extraction, and the
// split of the nonlocal part into an order-two term plus a drift
// correction that recombines into the modified drift.

#include <functional>
#include <vector>

#include "sslab/coefficients.hpp"
#include "sslab/linalg.hpp"

namespace sslab {

// Smooth test function with explicit analytic derivatives. The value
// engines consume gradient and hessian directly; nothing here is
// differentiated numerically.
struct TestFunction {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> gradient;
  std::function<Mat(const Vec&)> hessian;
  double bound = 1.0;  // sup-norm bound
};

// phi(x+z) - phi(x) - <grad phi(x), h(z)>.
double compensated_increment(const TestFunction& phi, const Vec& x, const Vec& z);

// <grad, b> + (1/2) tr[hess (sigma sigma* + M)] + sum_i w_i * compensated
// jump increment, for one control.
double eval_generator_single(const CoefficientField& field, int f, const TestFunction& phi,
                             const Vec& x);

struct GeneratorValue {
  double value = 0.0;
  int argmax = 0;  // lowest index on ties
};
GeneratorValue eval_generator(const CoefficientField& field, const ControlSet& controls,
                              const TestFunction& phi, const Vec& x);

// Split of the nonlocal operator at threshold kappa:
//   nonlocal      = sum over {gamma<=kappa} and {kappa<gamma<=1} of
//                   w [phi(x+k) - phi(x) - <grad phi(x), k>]
//                 + sum over {gamma>1} of w [phi(x+k) - phi(x)]
//   drift_correction = sum_{gamma<=1} w (k - h(k)) - sum_{gamma>1} w h(k)
// Recombination: nonlocal + <grad phi(x), drift_correction> equals the
// full compensated atom sum; drift_correction equals modified_drift - b.
struct NonlocalSplit {
  double nonlocal = 0.0;
  Vec drift_correction;
};
NonlocalSplit eval_nonlocal_split(const CoefficientField& field, int f, const TestFunction& phi,
                                  const Vec& x, double kappa);

// ---------------------------------------------------------------------------
// Test-function catalog
// ---------------------------------------------------------------------------

TestFunction tf_constant(int dim, double c);

// c * tanh(x_1 / c): bounded, slope 1 at the origin.
TestFunction tf_capped_coordinate(int dim, double cap = 2.0);

// amplitude * (1 - cos(omega x_1)): bounded, curvature amplitude*omega^2
// at the origin, zero slope there.
TestFunction tf_cosine_well(int dim, double amplitude = 2.0, double omega = 1.0);

// cos<xi, y - center> and sin<xi, y - center>: the probes dual to the
// symbol (generator on them reproduces -Re q and -Im q at the center).
TestFunction tf_cos_probe(const Vec& center, const Vec& xi);
TestFunction tf_sin_probe(const Vec& center, const Vec& xi);

// Verifies hessian symmetry and that finite differences of value match
// the declared gradient to 1e-4 relative at the given points.
bool check_test_function(const TestFunction& phi, const std::vector<Vec>& points,
                         double rel_tol = 1e-4);

}  // namespace sslab
