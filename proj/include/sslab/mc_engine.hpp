#pragma once

// Controlled jump-diffusion simulation under piecewise-constant Markov
// policies: Euler steps with per-step frozen coefficients, Poisson
// thinning per atom, compensator subtraction matching the truncation
// convention, and a moment-matched Gaussian for discarded small jumps.
// Paths are keyed by (seed, path index, step) substreams, and reductions
// use a fixed pairwise tree, so results are bit-identical for any worker
// count. Every policy value is a discretization-biased lower estimate of
// the sublinear value; the PDE engine supplies the upper object.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "sslab/coefficients.hpp"
#include "sslab/pide_solver.hpp"

namespace sslab {

// Measurable selection (time step, space cell) -> control. Cells are the
// nodes of a solver-shaped grid; states outside the box take the choice
// of the nearest boundary cell. Without a cell grid the policy is the
// constant `default_control`.
struct MarkovPolicy {
  int n_steps = 1;
  double dt = 0.0;
  std::optional<SpatialGrid> cells;
  std::vector<std::vector<std::uint16_t>> choice;  // [step][cell]
  std::uint16_t default_control = 0;

  static MarkovPolicy constant(int control, int n_steps, double dt);
  int control_at(int step, const Vec& x) const;
  double span() const { return dt * static_cast<double>(n_steps); }
  void validate(int n_controls) const;
};

struct SimulationResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  long n_paths = 0;
  // p -> empirical quantile of sup_s |X_s - x0| (probes 0.5/0.9/0.99/1).
  std::vector<std::pair<double, double>> excursion_quantiles;
};

struct PathEnd {
  Vec terminal;
  double sup_deviation = 0.0;
};

// One Euler path over [0, horizon]; fully determined by (seed, path_index).
PathEnd simulate_path(const CoefficientField& field, const MarkovPolicy& policy, const Vec& x0,
                      double horizon, std::uint64_t seed, std::uint64_t path_index);

// Mean and standard error of psi(X_horizon) over independent substreams.
SimulationResult estimate_value(const CoefficientField& field, const MarkovPolicy& policy,
                                const std::function<double(const Vec&)>& psi, const Vec& x0,
                                double horizon, long n_paths, std::uint64_t seed);

// Evaluates every constant policy with common random numbers; ties break
// to the lowest control index.
struct PolicyScan {
  int best = 0;
  std::vector<SimulationResult> per_control;
};
PolicyScan best_constant_policy(const CoefficientField& field, const ControlSet& controls,
                                const std::function<double(const Vec&)>& psi, const Vec& x0,
                                double horizon, long n_paths, std::uint64_t seed,
                                int n_steps = 200);

// Feedback policy synthesized from the solver's argmax record: the control
// applied on a forward time step is the one recorded at the matching
// remaining-time layer (midpoint convention).
MarkovPolicy extract_policy_from_pde(const PolicyRecord& record, int n_steps);

// Empirical exceedance table of sup_{s <= u} |X_s - x0| over the supplied
// radii; one path set serves every radius, so the table is nested exactly.
struct ExitTable {
  std::vector<double> r;
  std::vector<double> prob;
  std::vector<double> stderr_;
  long n_paths = 0;
};
ExitTable exit_probability(const CoefficientField& field, const MarkovPolicy& policy,
                           const Vec& x0, const std::vector<double>& r_values, double u,
                           long n_paths, std::uint64_t seed);

}  // namespace sslab
