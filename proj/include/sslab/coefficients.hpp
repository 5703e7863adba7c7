#pragma once

// Controlled coefficient fields for jump-diffusions under Knightian
// uncertainty: a finite control set selects among drift/diffusion/jump
// coefficients, jump measures are finite weighted atoms on a Euclidean
// mark space, and an optional second-moment matrix carries the mass of
// discarded small jumps. The module also hosts the Fourier symbol of the
// family and sampling-based validators for the structural conditions the
// value engines rely on (bounded coefficients, symbol decay at infinity,
// gamma-dominated jump amplitudes with state-Lipschitz dependence).

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sslab/errors.hpp"
#include "sslab/linalg.hpp"

namespace sslab {

// Finite ordered list of control points. Points are opaque parameter
// vectors; coefficient evaluators receive the index, not the point.
struct ControlSet {
  std::vector<Vec> points;
  std::vector<std::string> labels;

  int size() const { return static_cast<int>(points.size()); }
  void validate() const;
};

// Fixed truncation: h(y) = y * min(1, 1/|y|). Identity on the unit ball,
// norm bounded by 1, Lipschitz.
struct TruncationFunction {
  Vec operator()(const Vec& y) const {
    const double n = norm(y);
    const double s = (n <= 1.0) ? 1.0 : 1.0 / n;
    return scale(y, s);
  }
};

struct JumpAtom {
  Vec z;     // mark in the jump mark space
  double w;  // nonnegative rate, 1/time
};

// Finite-atom jump measure per control plus bookkeeping for the discarded
// small-jump region: gamma dominates jump amplitudes, kappa marks the
// small-jump threshold, and the second-moment matrices are folded into
// the diffusion by the value engines (zero for finite-activity setups).
struct JumpKernel {
  std::vector<std::vector<JumpAtom>> atoms;  // [control][atom]
  std::function<double(const Vec&)> gamma;
  double kappa = 0.5;
  std::vector<Mat> small_jump_second_moment;  // [control], d x d, may be empty

  bool has_small_jump_mass() const;
  void validate(int n_controls, int dim) const;
};

struct DeclaredLipschitz {
  double modified_drift = 0.0;
  double sigma = 0.0;
  double jump_over_gamma = 0.0;
};

// The controlled coefficient triple (b, sigma, k) over a finite control
// set, with its jump kernel and truncation convention.
struct CoefficientField {
  int dim = 1;        // state dimension d
  int noise_dim = 1;  // driving-noise dimension r
  int n_controls = 1;

  std::function<Vec(int, const Vec&)> drift;              // b(f, x), d
  std::function<Mat(int, const Vec&)> sigma;              // sigma(f, x), d x r
  std::function<Vec(int, const Vec&, const Vec&)> jump;   // k(f, x, z), d
  JumpKernel kernel;
  TruncationFunction truncation;
  std::optional<DeclaredLipschitz> declared_lipschitz;

  const Mat& small_jump_matrix(int f) const;
  void check_control(int f) const;
  void check_state(const Vec& x) const;
};

struct SymbolValue {
  double re = 0.0;
  double im = 0.0;
};

// Fourier symbol of the control-f coefficients at (x, xi):
//   -i<b, xi> + (1/2)<xi, sigma sigma* xi> + (1/2)<xi, M xi>
//   + sum_i w_i (1 - exp(i<k_i, xi>) + i<xi, h(k_i)>)
// with k_i the jump amplitude of atom i at x.
SymbolValue eval_symbol(const CoefficientField& field, int f, const Vec& x, const Vec& xi);

// Drift after recombining the truncation-compensated jump terms:
//   b + sum_{gamma<=1} w (k - h(k)) - sum_{gamma>1} w h(k).
Vec modified_drift(const CoefficientField& field, int f, const Vec& x);

// Drift with the full truncated-jump compensator removed:
//   b - sum_i w_i h(k_i).
// Pairing it with raw increments u(x+k)-u(x) reproduces the generator
// exactly; this is the drift the explicit scheme upwinds on and the
// Euler engine integrates.
Vec compensated_drift(const CoefficientField& field, int f, const Vec& x);

// One admissible characteristic triplet per control at state x. The jump
// part is the pushforward of the kernel through k(f, x, .), with mass at
// the origin dropped.
struct CharacteristicTriplet {
  Vec drift;
  Mat covariance;
  std::vector<JumpAtom> jumps;  // atom mark replaced by the jump amplitude
};
std::vector<CharacteristicTriplet> characteristic_triplets(const CoefficientField& field,
                                                           const Vec& x);

// Sampled symbol decay M(r) = max |q| over controls, |x| <= r, |xi| <= 1/r.
// PASS when M is nonincreasing across the supplied radii up to 5% slack.
struct SymbolDecayReport {
  std::vector<double> r;
  std::vector<double> max_symbol;
  bool pass = false;
};
SymbolDecayReport check_symbol_uniform_continuity(const CoefficientField& field,
                                                  const std::vector<double>& r_values,
                                                  int samples_per_shell,
                                                  std::uint64_t seed = 0);

// Tail bookkeeping of the jump kernel over its explicit atoms:
//   s(kappa) = max_f sum_{gamma(z_i) <= kappa} w_i gamma(z_i)^2
//   m(R)     = max_f sum_{gamma(z_i) > R} w_i
struct TightnessReport {
  std::vector<double> kappa;
  std::vector<double> small_jump_mass;  // s(kappa)
  std::vector<double> radius;
  std::vector<double> tail_mass;        // m(R)
  double max_gamma = 0.0;
  bool pass = false;
};
TightnessReport check_tightness(const JumpKernel& kernel, const std::vector<double>& kappa_values,
                                const std::vector<double>& r_values);

// Empirical Lipschitz-type moduli over sampled state pairs:
// modified drift, sigma (Frobenius), and jump amplitude scaled by gamma.
struct LipschitzEstimate {
  double modified_drift = 0.0;
  double sigma = 0.0;
  double jump_over_gamma = 0.0;
};
LipschitzEstimate estimate_lipschitz_constants(const CoefficientField& field, const Vec& box_lo,
                                               const Vec& box_hi, int n_pairs,
                                               std::uint64_t seed);

// Checks dimensions and the growth bound |k(f,x,z_i)| <= gamma(z_i)(1+|x|)
// on sampled states; throws InputError on violation.
void validate_field(const CoefficientField& field, const Vec& box_lo, const Vec& box_hi,
                    int n_samples = 64, std::uint64_t seed = 17);

// Synthesizes gamma(z) = max_f sup_x |k(f,x,z)| / (1+|x|) over sampled
// states, for kernels supplied without a bounding function.
std::function<double(const Vec&)> make_default_gamma(const CoefficientField& field,
                                                     const Vec& box_lo, const Vec& box_hi,
                                                     int n_samples = 64, std::uint64_t seed = 17);

}  // namespace sslab
