#pragma once

// Explicit monotone finite-difference solver for the nonlocal HJB
// evolution d/dt u = sup_f G_f u on a truncated uniform grid (dim 1 or 2).
// Drift terms are upwinded on the compensated drift, second-order terms
// use central differences (seven-point positive-coefficient stencil for
// cross terms in 2d), and jump increments read the grid through
// multilinear interpolation with clamp extension. Every update is a
// nonnegative combination of stencil values under the CFL bound, which is
// what makes the scheme order-preserving.

#include <cstdint>
#include <functional>
#include <vector>

#include "sslab/coefficients.hpp"
#include "sslab/linalg.hpp"

namespace sslab {

struct SpatialGrid {
  int dim = 1;
  Vec lo, hi;
  std::vector<int> n;  // nodes per axis, >= 3

  void validate() const;
  Vec spacing() const;
  std::size_t node_count() const;
  Vec node(std::size_t idx) const;
  std::size_t nearest_node(const Vec& x) const;  // clamps to the box

  // Multilinear interpolation with clamp extension; bumps *clamp_count
  // when x falls outside the box.
  double interpolate(const std::vector<double>& values, const Vec& x,
                     long* clamp_count = nullptr) const;

  bool is_interior_third(std::size_t idx) const;
  SpatialGrid refined() const;  // halves the spacing (n -> 2n - 1)
};

struct ValueField {
  SpatialGrid grid;
  double t = 0.0;
  std::vector<double> values;
};

ValueField make_value_field(const SpatialGrid& grid, const std::function<double(const Vec&)>& fn,
                            double t = 0.0);

struct SchemeConfig {
  double cfl_safety = 0.9;  // in (0, 1]
  double kappa = 0.5;       // small-jump threshold bookkeeping
  double max_dt = 5e-3;     // accuracy cap on top of the CFL bound
};

// Largest stable step: cfl_safety over the worst-node outflow
//   sum_axis ( |beta_a| / dx_a + (a_aa + M_aa) / dx_a^2 ) + sum_i w_i,
// capped at `horizon` (which is also the answer when all coefficients
// vanish).
double cfl_timestep(const CoefficientField& field, const ControlSet& controls,
                    const SpatialGrid& grid, const SchemeConfig& config, double horizon);

struct StepResult {
  ValueField next;
  std::vector<std::uint16_t> argmax;  // maximizing control per node
  long clamp_reads = 0;
};

// One forward-Euler layer of the discretized evolution. dt must satisfy
// the CFL bound; each output value is nondecreasing in every input value
// it reads.
StepResult step_explicit(const ValueField& u, const CoefficientField& field,
                         const ControlSet& controls, const SchemeConfig& config, double dt);

// Maximizing control per node for every time layer of a solve.
struct PolicyRecord {
  SpatialGrid grid;
  double horizon = 0.0;
  std::vector<double> step_times;                 // start time of each layer
  std::vector<std::vector<std::uint16_t>> argmax;  // [layer][node]
};

struct SolveResult {
  std::vector<ValueField> outputs;  // one per requested output time
  PolicyRecord policy;
  double cfl_dt = 0.0;
  long steps = 0;
  long clamp_reads = 0;
  bool max_principle_ok = true;  // outputs stayed inside the data bounds
};

// Marches psi to every requested output time (ascending, within
// [0, horizon]), subdividing the stable step to hit them exactly.
SolveResult solve(const ValueField& psi, const CoefficientField& field,
                  const ControlSet& controls, double horizon,
                  const std::vector<double>& output_times, const SchemeConfig& config);

// Empirical convergence study against a pointwise oracle: solves on
// successively halved spacings and reports the sup-error over the
// interior third of the box. PASS when each refinement shrinks the error
// by at least 1.5x (levels that sit at rounding noise are accepted).
struct RefineLevel {
  double dx = 0.0;
  double dt = 0.0;
  double sup_error = 0.0;
};
struct RefineStudy {
  std::vector<RefineLevel> levels;
  bool pass = false;
};
RefineStudy refine_study(const CoefficientField& field, const ControlSet& controls,
                         const SpatialGrid& base_grid,
                         const std::function<double(const Vec&)>& psi,
                         const std::function<double(const Vec&, double)>& oracle, double horizon,
                         const SchemeConfig& config, int levels);

}  // namespace sslab
