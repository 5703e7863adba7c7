#include "sslab/generator.hpp"

#include <cmath>
#include <limits>

namespace sslab {

double compensated_increment(const TestFunction& phi, const Vec& x, const Vec& z) {
  const TruncationFunction h;
  return phi.value(add(x, z)) - phi.value(x) - dot(phi.gradient(x), h(z));
}

double eval_generator_single(const CoefficientField& field, int f, const TestFunction& phi,
                             const Vec& x) {
  field.check_control(f);
  field.check_state(x);
  const Vec grad = phi.gradient(x);
  const Mat hess = phi.hessian(x);

  double g = dot(grad, field.drift(f, x));
  g += 0.5 * trace_prod(hess, outer_self(field.sigma(f, x)));
  const Mat& m = field.small_jump_matrix(f);
  if (!m.empty()) g += 0.5 * trace_prod(hess, m);

  const double phi_x = phi.value(x);
  const TruncationFunction h;
  for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
    const Vec k = field.jump(f, x, atom.z);
    g += atom.w * (phi.value(add(x, k)) - phi_x - dot(grad, h(k)));
  }
  return g;
}

GeneratorValue eval_generator(const CoefficientField& field, const ControlSet& controls,
                              const TestFunction& phi, const Vec& x) {
  controls.validate();
  GeneratorValue best;
  best.value = -std::numeric_limits<double>::infinity();
  for (int f = 0; f < controls.size(); ++f) {
    const double v = eval_generator_single(field, f, phi, x);
    if (v > best.value) {
      best.value = v;
      best.argmax = f;
    }
  }
  return best;
}

NonlocalSplit eval_nonlocal_split(const CoefficientField& field, int f, const TestFunction& phi,
                                  const Vec& x, double kappa) {
  field.check_control(f);
  field.check_state(x);
  if (!(kappa > 0.0) || !(kappa < 1.0)) throw InputError("kappa must lie in (0, 1)");

  NonlocalSplit split;
  split.drift_correction.assign(static_cast<std::size_t>(field.dim), 0.0);
  const Vec grad = phi.gradient(x);
  const double phi_x = phi.value(x);
  const TruncationFunction h;

  for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
    const double g = field.kernel.gamma ? field.kernel.gamma(atom.z) : 0.0;
    const Vec k = field.jump(f, x, atom.z);
    const double increment = phi.value(add(x, k)) - phi_x;
    if (g <= 1.0) {
      // buckets {gamma <= kappa} and {kappa < gamma <= 1} share the form
      split.nonlocal += atom.w * (increment - dot(grad, k));
      axpy(split.drift_correction, atom.w, sub(k, h(k)));
    } else {
      split.nonlocal += atom.w * increment;
      axpy(split.drift_correction, -atom.w, h(k));
    }
  }
  return split;
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

TestFunction tf_constant(int dim, double c) {
  TestFunction tf;
  tf.value = [c](const Vec&) { return c; };
  tf.gradient = [dim](const Vec&) { return Vec(static_cast<std::size_t>(dim), 0.0); };
  tf.hessian = [dim](const Vec&) { return Mat(dim, dim); };
  tf.bound = std::abs(c);
  return tf;
}

TestFunction tf_capped_coordinate(int dim, double cap) {
  TestFunction tf;
  tf.value = [cap](const Vec& x) { return cap * std::tanh(x[0] / cap); };
  tf.gradient = [dim, cap](const Vec& x) {
    Vec g(static_cast<std::size_t>(dim), 0.0);
    const double t = std::tanh(x[0] / cap);
    g[0] = 1.0 - t * t;
    return g;
  };
  tf.hessian = [dim, cap](const Vec& x) {
    Mat h(dim, dim);
    const double t = std::tanh(x[0] / cap);
    h(0, 0) = -2.0 * t * (1.0 - t * t) / cap;
    return h;
  };
  tf.bound = cap;
  return tf;
}

TestFunction tf_cosine_well(int dim, double amplitude, double omega) {
  TestFunction tf;
  tf.value = [amplitude, omega](const Vec& x) { return amplitude * (1.0 - std::cos(omega * x[0])); };
  tf.gradient = [dim, amplitude, omega](const Vec& x) {
    Vec g(static_cast<std::size_t>(dim), 0.0);
    g[0] = amplitude * omega * std::sin(omega * x[0]);
    return g;
  };
  tf.hessian = [dim, amplitude, omega](const Vec& x) {
    Mat h(dim, dim);
    h(0, 0) = amplitude * omega * omega * std::cos(omega * x[0]);
    return h;
  };
  tf.bound = 2.0 * amplitude;
  return tf;
}

TestFunction tf_cos_probe(const Vec& center, const Vec& xi) {
  const int dim = static_cast<int>(center.size());
  TestFunction tf;
  tf.value = [center, xi](const Vec& y) { return std::cos(dot(xi, sub(y, center))); };
  tf.gradient = [center, xi](const Vec& y) {
    return scale(xi, -std::sin(dot(xi, sub(y, center))));
  };
  tf.hessian = [center, xi, dim](const Vec& y) {
    const double c = std::cos(dot(xi, sub(y, center)));
    Mat h(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        h(i, j) = -c * xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)];
    return h;
  };
  tf.bound = 1.0;
  return tf;
}

TestFunction tf_sin_probe(const Vec& center, const Vec& xi) {
  const int dim = static_cast<int>(center.size());
  TestFunction tf;
  tf.value = [center, xi](const Vec& y) { return std::sin(dot(xi, sub(y, center))); };
  tf.gradient = [center, xi](const Vec& y) {
    return scale(xi, std::cos(dot(xi, sub(y, center))));
  };
  tf.hessian = [center, xi, dim](const Vec& y) {
    const double s = std::sin(dot(xi, sub(y, center)));
    Mat h(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        h(i, j) = -s * xi[static_cast<std::size_t>(i)] * xi[static_cast<std::size_t>(j)];
    return h;
  };
  tf.bound = 1.0;
  return tf;
}

bool check_test_function(const TestFunction& phi, const std::vector<Vec>& points,
                         double rel_tol) {
  const double step = 1e-6;
  for (const Vec& x : points) {
    const Mat h = phi.hessian(x);
    for (int i = 0; i < h.rows; ++i)
      for (int j = 0; j < i; ++j)
        if (std::abs(h(i, j) - h(j, i)) > 1e-10) return false;

    const Vec g = phi.gradient(x);
    for (std::size_t a = 0; a < x.size(); ++a) {
      Vec xp = x, xm = x;
      xp[a] += step;
      xm[a] -= step;
      const double fd = (phi.value(xp) - phi.value(xm)) / (2.0 * step);
      const double scale_ref = std::max({std::abs(g[a]), std::abs(fd), 1e-3});
      if (std::abs(fd - g[a]) > rel_tol * scale_ref) return false;
    }
  }
  return true;
}

}  // namespace sslab
