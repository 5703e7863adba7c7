#include "sslab/coefficients.hpp"

#include <algorithm>
#include <cmath>

#include "sslab/rng.hpp"

namespace sslab {

void ControlSet::validate() const {
  if (points.empty()) throw InputError("control set must be nonempty");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) throw InputError("control points must be pairwise distinct");
  if (!labels.empty() && labels.size() != points.size())
    throw InputError("control labels must match control count");
}

bool JumpKernel::has_small_jump_mass() const {
  for (const Mat& m : small_jump_second_moment)
    for (double v : m.data)
      if (v != 0.0) return true;
  return false;
}

void JumpKernel::validate(int n_controls, int dim) const {
  if (static_cast<int>(atoms.size()) != n_controls)
    throw InputError("jump kernel must carry one atom list per control");
  if (kappa <= 0.0 || kappa > 1.0) throw InputError("kappa must lie in (0, 1]");
  for (const auto& list : atoms)
    for (const auto& a : list) {
      if (!(a.w >= 0.0) || !std::isfinite(a.w)) throw InputError("atom rates must be >= 0");
      if (gamma && !(gamma(a.z) >= 0.0)) throw InputError("gamma must be nonnegative on atoms");
    }
  for (const Mat& m : small_jump_second_moment) {
    if (m.rows != dim || m.cols != dim)
      throw InputError("small-jump second moment must be d x d");
    for (int i = 0; i < m.rows; ++i)
      for (int j = 0; j < i; ++j)
        if (std::abs(m(i, j) - m(j, i)) > 1e-12)
          throw InputError("small-jump second moment must be symmetric");
  }
}

const Mat& CoefficientField::small_jump_matrix(int f) const {
  static const Mat kZero1(1, 1), kZero2(2, 2), kZero3(3, 3);
  if (f < static_cast<int>(kernel.small_jump_second_moment.size()))
    return kernel.small_jump_second_moment[static_cast<std::size_t>(f)];
  if (dim == 1) return kZero1;
  if (dim == 2) return kZero2;
  if (dim == 3) return kZero3;
  static thread_local Mat zero;
  zero = Mat(dim, dim);
  return zero;
}

void CoefficientField::check_control(int f) const {
  if (f < 0 || f >= n_controls) throw InputError("control index out of range");
}

void CoefficientField::check_state(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim) throw InputError("state dimension mismatch");
}

SymbolValue eval_symbol(const CoefficientField& field, int f, const Vec& x, const Vec& xi) {
  field.check_control(f);
  field.check_state(x);
  if (static_cast<int>(xi.size()) != field.dim) throw InputError("frequency dimension mismatch");

  SymbolValue q;
  q.im = -dot(field.drift(f, x), xi);
  q.re = 0.5 * quad_form(xi, outer_self(field.sigma(f, x)));
  const Mat& m = field.small_jump_matrix(f);
  if (!m.empty()) q.re += 0.5 * quad_form(xi, m);

  for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
    const Vec k = field.jump(f, x, atom.z);
    if (norm(k) == 0.0) continue;  // pushforward excludes the origin
    const double phase = dot(k, xi);
    q.re += atom.w * (1.0 - std::cos(phase));
    q.im += atom.w * (-std::sin(phase) + dot(xi, field.truncation(k)));
  }
  return q;
}

Vec modified_drift(const CoefficientField& field, int f, const Vec& x) {
  field.check_control(f);
  field.check_state(x);
  Vec b = field.drift(f, x);
  for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
    const double g = field.kernel.gamma ? field.kernel.gamma(atom.z) : 0.0;
    const Vec k = field.jump(f, x, atom.z);
    const Vec hk = field.truncation(k);
    if (g <= 1.0) {
      axpy(b, atom.w, sub(k, hk));
    } else {
      axpy(b, -atom.w, hk);
    }
  }
  return b;
}

Vec compensated_drift(const CoefficientField& field, int f, const Vec& x) {
  field.check_control(f);
  field.check_state(x);
  Vec b = field.drift(f, x);
  for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
    const Vec k = field.jump(f, x, atom.z);
    axpy(b, -atom.w, field.truncation(k));
  }
  return b;
}

std::vector<CharacteristicTriplet> characteristic_triplets(const CoefficientField& field,
                                                           const Vec& x) {
  field.check_state(x);
  std::vector<CharacteristicTriplet> out;
  out.reserve(static_cast<std::size_t>(field.n_controls));
  for (int f = 0; f < field.n_controls; ++f) {
    CharacteristicTriplet t;
    t.drift = field.drift(f, x);
    t.covariance = outer_self(field.sigma(f, x));
    for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
      Vec k = field.jump(f, x, atom.z);
      if (norm(k) == 0.0) continue;
      t.jumps.push_back({std::move(k), atom.w});
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace {

// Deterministic direction set: axis vectors plus seeded unit directions,
// shared across shells so sampled maxima inherit the symbol's decay.
std::vector<Vec> probe_directions(int dim, int n_random, std::uint64_t seed) {
  std::vector<Vec> dirs;
  for (int a = 0; a < dim; ++a) {
    Vec e(static_cast<std::size_t>(dim), 0.0);
    e[static_cast<std::size_t>(a)] = 1.0;
    dirs.push_back(e);
    e[static_cast<std::size_t>(a)] = -1.0;
    dirs.push_back(e);
  }
  SubstreamRng rng(seed, 0x5eed, 1);
  for (int i = 0; i < n_random; ++i) {
    Vec v = rng.normal_vec(dim);
    const double n = norm(v);
    if (n < 1e-12) continue;
    dirs.push_back(scale(v, 1.0 / n));
  }
  return dirs;
}

}  // namespace

SymbolDecayReport check_symbol_uniform_continuity(const CoefficientField& field,
                                                  const std::vector<double>& r_values,
                                                  int samples_per_shell, std::uint64_t seed) {
  if (r_values.empty() || samples_per_shell <= 0)
    throw InputError("symbol decay check needs radii and a positive sample count");
  for (std::size_t i = 0; i + 1 < r_values.size(); ++i)
    if (!(r_values[i] > 0.0) || !(r_values[i] < r_values[i + 1]))
      throw InputError("radii must be positive and increasing");

  const auto dirs = probe_directions(field.dim, samples_per_shell, seed);
  const double x_mags[] = {0.0, 0.5, 1.0};
  const double xi_mags[] = {1.0, 0.5};

  SymbolDecayReport report;
  report.r = r_values;
  for (double r : r_values) {
    double worst = 0.0;
    for (int f = 0; f < field.n_controls; ++f)
      for (const Vec& dx : dirs)
        for (double mx : x_mags) {
          const Vec x = scale(dx, mx * r);
          for (const Vec& dxi : dirs)
            for (double mxi : xi_mags) {
              const Vec xi = scale(dxi, mxi / r);
              const SymbolValue q = eval_symbol(field, f, x, xi);
              worst = std::max(worst, std::hypot(q.re, q.im));
            }
        }
    report.max_symbol.push_back(worst);
  }

  report.pass = true;
  for (std::size_t i = 0; i + 1 < report.max_symbol.size(); ++i)
    if (report.max_symbol[i + 1] > 1.05 * report.max_symbol[i] + 1e-15) report.pass = false;
  return report;
}

TightnessReport check_tightness(const JumpKernel& kernel, const std::vector<double>& kappa_values,
                                const std::vector<double>& r_values) {
  for (double k : kappa_values)
    if (!(k > 0.0) || k > 1.0) throw InputError("kappa values must lie in (0, 1]");
  for (double r : r_values)
    if (!(r >= 1.0)) throw InputError("radius values must be >= 1");

  TightnessReport report;
  report.kappa = kappa_values;
  report.radius = r_values;
  std::sort(report.kappa.begin(), report.kappa.end());
  std::sort(report.radius.begin(), report.radius.end());

  for (const auto& list : kernel.atoms)
    for (const auto& atom : list)
      report.max_gamma = std::max(report.max_gamma, kernel.gamma ? kernel.gamma(atom.z) : 0.0);

  for (double kap : report.kappa) {
    double worst = 0.0;
    for (const auto& list : kernel.atoms) {
      double s = 0.0;
      for (const auto& atom : list) {
        const double g = kernel.gamma ? kernel.gamma(atom.z) : 0.0;
        if (g <= kap) s += atom.w * g * g;
      }
      worst = std::max(worst, s);
    }
    report.small_jump_mass.push_back(worst);
  }
  for (double r : report.radius) {
    double worst = 0.0;
    for (const auto& list : kernel.atoms) {
      double m = 0.0;
      for (const auto& atom : list) {
        const double g = kernel.gamma ? kernel.gamma(atom.z) : 0.0;
        if (g > r) m += atom.w;
      }
      worst = std::max(worst, m);
    }
    report.tail_mass.push_back(worst);
  }

  bool monotone = true;
  for (std::size_t i = 0; i + 1 < report.small_jump_mass.size(); ++i)
    if (report.small_jump_mass[i] > report.small_jump_mass[i + 1] + 1e-15) monotone = false;
  bool tail_ok = true;
  for (std::size_t i = 0; i < report.radius.size(); ++i)
    if (report.radius[i] > report.max_gamma && report.tail_mass[i] != 0.0) tail_ok = false;
  report.pass = monotone && tail_ok;
  return report;
}

LipschitzEstimate estimate_lipschitz_constants(const CoefficientField& field, const Vec& box_lo,
                                               const Vec& box_hi, int n_pairs,
                                               std::uint64_t seed) {
  if (n_pairs < 2) throw InputError("need at least 2 sample pairs");
  LipschitzEstimate est;
  SubstreamRng rng(seed, 0x11b5, 2);
  for (int p = 0; p < n_pairs; ++p) {
    const Vec x = rng.uniform_in_box(box_lo, box_hi);
    const Vec y = rng.uniform_in_box(box_lo, box_hi);
    const double dxy = norm(sub(x, y));
    if (dxy < 1e-14) continue;  // coincident pair: skipped
    for (int f = 0; f < field.n_controls; ++f) {
      est.modified_drift = std::max(
          est.modified_drift, norm(sub(modified_drift(field, f, x), modified_drift(field, f, y))) / dxy);
      Mat sx = field.sigma(f, x);
      const Mat sy = field.sigma(f, y);
      for (std::size_t i = 0; i < sx.data.size(); ++i) sx.data[i] -= sy.data[i];
      est.sigma = std::max(est.sigma, frobenius(sx) / dxy);
      for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
        const double g = field.kernel.gamma ? field.kernel.gamma(atom.z) : 0.0;
        if (g <= 0.0) continue;
        const double dk = norm(sub(field.jump(f, x, atom.z), field.jump(f, y, atom.z)));
        est.jump_over_gamma = std::max(est.jump_over_gamma, dk / (g * dxy));
      }
    }
  }
  return est;
}

void validate_field(const CoefficientField& field, const Vec& box_lo, const Vec& box_hi,
                    int n_samples, std::uint64_t seed) {
  if (field.dim < 1) throw InputError("state dimension must be >= 1");
  if (field.n_controls < 1) throw InputError("need at least one control");
  field.kernel.validate(field.n_controls, field.dim);

  SubstreamRng rng(seed, 0xf1e1d, 3);
  for (int s = 0; s < n_samples; ++s) {
    const Vec x = rng.uniform_in_box(box_lo, box_hi);
    for (int f = 0; f < field.n_controls; ++f) {
      if (static_cast<int>(field.drift(f, x).size()) != field.dim)
        throw InputError("drift dimension mismatch");
      const Mat sg = field.sigma(f, x);
      if (sg.rows != field.dim || sg.cols != field.noise_dim)
        throw InputError("sigma dimension mismatch");
      for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
        const Vec k = field.jump(f, x, atom.z);
        if (static_cast<int>(k.size()) != field.dim)
          throw InputError("jump amplitude dimension mismatch");
        if (field.kernel.gamma) {
          const double g = field.kernel.gamma(atom.z);
          if (norm(k) > g * (1.0 + norm(x)) + 1e-9)
            throw InputError("jump amplitude exceeds gamma growth bound");
        }
      }
    }
  }
}

std::function<double(const Vec&)> make_default_gamma(const CoefficientField& field,
                                                     const Vec& box_lo, const Vec& box_hi,
                                                     int n_samples, std::uint64_t seed) {
  // Capture sampled states once; the returned evaluator is pure.
  auto states = std::make_shared<std::vector<Vec>>();
  SubstreamRng rng(seed, 0x9a77a, 4);
  for (int s = 0; s < n_samples; ++s) states->push_back(rng.uniform_in_box(box_lo, box_hi));

  const auto jump = field.jump;
  const int n_controls = field.n_controls;
  return [states, jump, n_controls](const Vec& z) {
    double g = 0.0;
    for (int f = 0; f < n_controls; ++f)
      for (const Vec& x : *states) g = std::max(g, norm(jump(f, x, z)) / (1.0 + norm(x)));
    return g;
  };
}

}  // namespace sslab
