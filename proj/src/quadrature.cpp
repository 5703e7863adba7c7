#include "sslab/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace sslab {

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("need at least one node");
  GaussHermite gh;
  gh.nodes.resize(static_cast<std::size_t>(n));
  gh.weights.resize(static_cast<std::size_t>(n));

  const double pif = 3.14159265358979323846;
  double z = 0.0;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // initial guesses (Numerical Recipes ordering: largest root first)
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * gh.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * gh.nodes[1];
    else
      z = 2.0 * z - gh.nodes[static_cast<std::size_t>(i - 2)];

    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // recurrence for orthonormal Hermite functions
      double p1 = std::pow(pif, -0.25);
      double p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    gh.nodes[static_cast<std::size_t>(i)] = z;
    gh.nodes[static_cast<std::size_t>(n - 1 - i)] = -z;
    const double w = 2.0 / (pp * pp);
    gh.weights[static_cast<std::size_t>(i)] = w;
    gh.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return gh;
}

double expectation_gaussian(const std::function<double(double)>& fn, double mean, double stddev,
                            int n_nodes) {
  if (stddev == 0.0) return fn(mean);
  const GaussHermite gh = gauss_hermite(n_nodes);
  const double root2 = std::sqrt(2.0);
  const double inv_sqrt_pi = 1.0 / std::sqrt(3.14159265358979323846);
  double s = 0.0;
  for (std::size_t i = 0; i < gh.nodes.size(); ++i)
    s += gh.weights[i] * fn(mean + stddev * root2 * gh.nodes[i]);
  return s * inv_sqrt_pi;
}

double expectation_poisson(const std::function<double(double)>& fn, double mean, double jump,
                           double base) {
  if (mean <= 0.0) return fn(base);
  double p = std::exp(-mean);  // P(N = 0)
  double cum = p;
  double s = p * fn(base);
  for (long n = 1; n < 100000; ++n) {
    p *= mean / static_cast<double>(n);
    cum += p;
    s += p * fn(base + jump * static_cast<double>(n));
    if (1.0 - cum < 1e-14 && n > mean) break;
  }
  return s;
}

double expectation_poisson_gaussian(const std::function<double(double)>& fn, double poisson_mean,
                                    double jump, double base, double stddev, int n_nodes) {
  return expectation_poisson(
      [&](double y) { return expectation_gaussian(fn, y, stddev, n_nodes); }, poisson_mean, jump,
      base);
}

}  // namespace sslab
