#pragma once

// Quadrature helpers for scenario oracles. Deliberately independent of
// the PDE and Monte Carlo engines: closed-form Gaussian and Poisson
// expectations computed by Gauss-Hermite nodes and truncated series.

#include <functional>
#include <vector>

namespace sslab {

struct GaussHermite {
  std::vector<double> nodes;    // roots of H_n (physicists' convention)
  std::vector<double> weights;  // integrate against exp(-x^2)
};

// Nodes and weights by Newton iteration on the Hermite recurrence.
GaussHermite gauss_hermite(int n);

// E[fn(mean + stddev * Z)], Z standard normal.
double expectation_gaussian(const std::function<double(double)>& fn, double mean, double stddev,
                            int n_nodes = 64);

// E[fn(base + jump * N)], N Poisson with the given mean; the series is
// truncated once the remaining tail mass drops below 1e-14.
double expectation_poisson(const std::function<double(double)>& fn, double mean, double jump,
                           double base);

// E[fn(base + jump * N + stddev * Z)] with independent N and Z.
double expectation_poisson_gaussian(const std::function<double(double)>& fn, double poisson_mean,
                                    double jump, double base, double stddev, int n_nodes = 64);

}  // namespace sslab
