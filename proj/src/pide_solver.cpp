#include "sslab/pide_solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>

#include "sslab/parallel.hpp"

namespace sslab {

void SpatialGrid::validate() const {
  if (dim < 1 || dim > 2) throw InputError("grid dimension must be 1 or 2");
  if (static_cast<int>(lo.size()) != dim || static_cast<int>(hi.size()) != dim ||
      static_cast<int>(n.size()) != dim)
    throw InputError("grid arrays must match the dimension");
  for (int a = 0; a < dim; ++a) {
    if (n[static_cast<std::size_t>(a)] < 3) throw InputError("need at least 3 nodes per axis");
    if (!(hi[static_cast<std::size_t>(a)] > lo[static_cast<std::size_t>(a)]))
      throw InputError("box corners must satisfy lo < hi");
  }
}

Vec SpatialGrid::spacing() const {
  Vec s(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a)
    s[static_cast<std::size_t>(a)] =
        (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) /
        (n[static_cast<std::size_t>(a)] - 1);
  return s;
}

std::size_t SpatialGrid::node_count() const {
  std::size_t c = 1;
  for (int a = 0; a < dim; ++a) c *= static_cast<std::size_t>(n[static_cast<std::size_t>(a)]);
  return c;
}

Vec SpatialGrid::node(std::size_t idx) const {
  const Vec s = spacing();
  Vec x(static_cast<std::size_t>(dim));
  std::size_t rem = idx;
  for (int a = 0; a < dim; ++a) {
    const std::size_t na = static_cast<std::size_t>(n[static_cast<std::size_t>(a)]);
    const std::size_t ia = rem % na;
    rem /= na;
    x[static_cast<std::size_t>(a)] =
        lo[static_cast<std::size_t>(a)] + static_cast<double>(ia) * s[static_cast<std::size_t>(a)];
  }
  return x;
}

std::size_t SpatialGrid::nearest_node(const Vec& x) const {
  const Vec s = spacing();
  std::size_t idx = 0;
  std::size_t mult = 1;
  for (int a = 0; a < dim; ++a) {
    const int na = n[static_cast<std::size_t>(a)];
    double pos = (x[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) /
                 s[static_cast<std::size_t>(a)];
    int ia = static_cast<int>(std::lround(pos));
    ia = std::clamp(ia, 0, na - 1);
    idx += static_cast<std::size_t>(ia) * mult;
    mult *= static_cast<std::size_t>(na);
  }
  return idx;
}

double SpatialGrid::interpolate(const std::vector<double>& values, const Vec& x,
                                long* clamp_count) const {
  const Vec s = spacing();
  int cell[2] = {0, 0};
  double frac[2] = {0.0, 0.0};
  bool clamped = false;
  for (int a = 0; a < dim; ++a) {
    const int na = n[static_cast<std::size_t>(a)];
    double xa = x[static_cast<std::size_t>(a)];
    const double lo_a = lo[static_cast<std::size_t>(a)];
    const double hi_a = hi[static_cast<std::size_t>(a)];
    if (xa < lo_a - 1e-12 || xa > hi_a + 1e-12) clamped = true;
    xa = std::clamp(xa, lo_a, hi_a);
    double pos = (xa - lo_a) / s[static_cast<std::size_t>(a)];
    int ia = static_cast<int>(std::floor(pos));
    ia = std::clamp(ia, 0, na - 2);
    cell[a] = ia;
    frac[a] = std::clamp(pos - ia, 0.0, 1.0);
  }
  if (clamped && clamp_count) ++*clamp_count;

  const std::size_t n0 = static_cast<std::size_t>(n[0]);
  if (dim == 1) {
    const std::size_t i = static_cast<std::size_t>(cell[0]);
    return (1.0 - frac[0]) * values[i] + frac[0] * values[i + 1];
  }
  const std::size_t i = static_cast<std::size_t>(cell[0]);
  const std::size_t j = static_cast<std::size_t>(cell[1]);
  const double v00 = values[i + n0 * j];
  const double v10 = values[i + 1 + n0 * j];
  const double v01 = values[i + n0 * (j + 1)];
  const double v11 = values[i + 1 + n0 * (j + 1)];
  const double a0 = (1.0 - frac[0]) * v00 + frac[0] * v10;
  const double a1 = (1.0 - frac[0]) * v01 + frac[0] * v11;
  return (1.0 - frac[1]) * a0 + frac[1] * a1;
}

bool SpatialGrid::is_interior_third(std::size_t idx) const {
  std::size_t rem = idx;
  for (int a = 0; a < dim; ++a) {
    const int na = n[static_cast<std::size_t>(a)];
    const int ia = static_cast<int>(rem % static_cast<std::size_t>(na));
    rem /= static_cast<std::size_t>(na);
    const double pos = static_cast<double>(ia) / (na - 1);
    if (pos < 1.0 / 3.0 - 1e-12 || pos > 2.0 / 3.0 + 1e-12) return false;
  }
  return true;
}

SpatialGrid SpatialGrid::refined() const {
  SpatialGrid g(*this);
  for (int a = 0; a < dim; ++a)
    g.n[static_cast<std::size_t>(a)] = 2 * n[static_cast<std::size_t>(a)] - 1;
  return g;
}

ValueField make_value_field(const SpatialGrid& grid, const std::function<double(const Vec&)>& fn,
                            double t) {
  grid.validate();
  ValueField u;
  u.grid = grid;
  u.t = t;
  u.values.resize(grid.node_count());
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = fn(grid.node(i));
  return u;
}

namespace {

// Outflow rate of the explicit update at one node under one control:
// sum_axis (|beta_a|/dx_a + (a_aa + M_aa)/dx_a^2) + sum_i w_i.
double node_outflow(const CoefficientField& field, int f, const Vec& x, const Vec& dx) {
  const Vec beta = compensated_drift(field, f, x);
  const Mat a = mat_add(outer_self(field.sigma(f, x)), field.small_jump_matrix(f));
  double out = 0.0;
  for (int ax = 0; ax < field.dim; ++ax) {
    const double h = dx[static_cast<std::size_t>(ax)];
    out += std::abs(beta[static_cast<std::size_t>(ax)]) / h + a(ax, ax) / (h * h);
  }
  for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) out += atom.w;
  return out;
}

}  // namespace

double cfl_timestep(const CoefficientField& field, const ControlSet& controls,
                    const SpatialGrid& grid, const SchemeConfig& config, double horizon) {
  grid.validate();
  if (!(config.cfl_safety > 0.0) || config.cfl_safety > 1.0)
    throw InputError("cfl_safety must lie in (0, 1]");
  const Vec dx = grid.spacing();
  double worst = 0.0;
  for (std::size_t idx = 0; idx < grid.node_count(); ++idx) {
    const Vec x = grid.node(idx);
    for (int f = 0; f < controls.size(); ++f)
      worst = std::max(worst, node_outflow(field, f, x, dx));
  }
  if (worst <= 0.0) return horizon;  // nothing moves: one step suffices
  return std::min(config.cfl_safety / worst, horizon);
}

namespace {

struct NodeIndexer {
  int dim;
  int n0, n1;

  std::size_t clamped(int i0, int i1) const {
    i0 = std::clamp(i0, 0, n0 - 1);
    if (dim == 1) return static_cast<std::size_t>(i0);
    i1 = std::clamp(i1, 0, n1 - 1);
    return static_cast<std::size_t>(i0) + static_cast<std::size_t>(n0) * static_cast<std::size_t>(i1);
  }
};

}  // namespace

StepResult step_explicit(const ValueField& u, const CoefficientField& field,
                         const ControlSet& controls, const SchemeConfig& config, double dt) {
  u.grid.validate();
  if (!(dt > 0.0)) throw InputError("dt must be positive");
  const SpatialGrid& grid = u.grid;
  const Vec dx = grid.spacing();
  const int nf = controls.size();
  const std::size_t n_nodes = grid.node_count();

  StepResult result;
  result.next.grid = grid;
  result.next.t = u.t + dt;
  result.next.values.assign(n_nodes, 0.0);
  result.argmax.assign(n_nodes, 0);

  const NodeIndexer at{grid.dim, grid.n[0], grid.dim == 2 ? grid.n[1] : 1};
  const std::vector<double>& v = u.values;
  std::atomic<long> clamp_total{0};
  std::atomic<long> bad_node{-1};
  std::atomic<int> bad_control{0};

  parallel_for(n_nodes, [&](std::size_t begin, std::size_t end) {
    long clamp_local = 0;
    for (std::size_t idx = begin; idx < end; ++idx) {
      if (bad_node.load(std::memory_order_relaxed) >= 0) break;
      const Vec x = grid.node(idx);
      const int i0 = static_cast<int>(idx % static_cast<std::size_t>(at.n0));
      const int i1 = grid.dim == 2 ? static_cast<int>(idx / static_cast<std::size_t>(at.n0)) : 0;
      const double v_here = v[idx];

      double best = -std::numeric_limits<double>::infinity();
      int best_f = 0;
      for (int f = 0; f < nf; ++f) {
        double l = 0.0;

        // upwinded first-order part on the compensated drift
        const Vec beta = compensated_drift(field, f, x);
        for (int ax = 0; ax < grid.dim; ++ax) {
          const double b = beta[static_cast<std::size_t>(ax)];
          if (b == 0.0) continue;
          const double h = dx[static_cast<std::size_t>(ax)];
          const int di0 = ax == 0 ? 1 : 0;
          const int di1 = ax == 1 ? 1 : 0;
          if (b > 0.0)
            l += b * (v[at.clamped(i0 + di0, i1 + di1)] - v_here) / h;
          else
            l += -b * (v[at.clamped(i0 - di0, i1 - di1)] - v_here) / h;
        }

        // second-order part
        const Mat a = mat_add(outer_self(field.sigma(f, x)), field.small_jump_matrix(f));
        if (grid.dim == 1) {
          l += 0.5 * a(0, 0) *
               (v[at.clamped(i0 + 1, 0)] - 2.0 * v_here + v[at.clamped(i0 - 1, 0)]) /
               (dx[0] * dx[0]);
        } else {
          const double h0 = dx[0], h1 = dx[1];
          const double c = a(0, 1);
          const double w_diag0 = 0.5 * a(0, 0) / (h0 * h0) - std::abs(c) / (2.0 * h0 * h1);
          const double w_diag1 = 0.5 * a(1, 1) / (h1 * h1) - std::abs(c) / (2.0 * h0 * h1);
          if (w_diag0 < -1e-14 || w_diag1 < -1e-14) {
            bad_node.store(static_cast<long>(idx));
            bad_control.store(f);
            break;
          }
          l += std::max(w_diag0, 0.0) *
               (v[at.clamped(i0 + 1, i1)] - 2.0 * v_here + v[at.clamped(i0 - 1, i1)]);
          l += std::max(w_diag1, 0.0) *
               (v[at.clamped(i0, i1 + 1)] - 2.0 * v_here + v[at.clamped(i0, i1 - 1)]);
          if (c > 0.0) {
            l += c / (2.0 * h0 * h1) *
                 (v[at.clamped(i0 + 1, i1 + 1)] - 2.0 * v_here + v[at.clamped(i0 - 1, i1 - 1)]);
          } else if (c < 0.0) {
            l += -c / (2.0 * h0 * h1) *
                 (v[at.clamped(i0 + 1, i1 - 1)] - 2.0 * v_here + v[at.clamped(i0 - 1, i1 + 1)]);
          }
        }

        // nonlocal part in recombined form: w * (u(x + k) - u(x))
        for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
          if (atom.w == 0.0) continue;
          const Vec dest = add(x, field.jump(f, x, atom.z));
          l += atom.w * (grid.interpolate(v, dest, &clamp_local) - v_here);
        }

        if (l > best) {
          best = l;
          best_f = f;
        }
      }
      result.next.values[idx] = v_here + dt * best;
      result.argmax[idx] = static_cast<std::uint16_t>(best_f);
    }
    clamp_total += clamp_local;
  });

  if (bad_node.load() >= 0)
    throw std::runtime_error("covariance not diagonally dominant at node " +
                             std::to_string(bad_node.load()) + " control " +
                             std::to_string(bad_control.load()) +
                             "; cross term too large for the stencil");
  result.clamp_reads = clamp_total.load();
  return result;
}

SolveResult solve(const ValueField& psi, const CoefficientField& field,
                  const ControlSet& controls, double horizon,
                  const std::vector<double>& output_times, const SchemeConfig& config) {
  psi.grid.validate();
  controls.validate();
  if (horizon < 0.0) throw InputError("horizon must be >= 0");
  std::vector<double> times = output_times.empty() ? std::vector<double>{horizon} : output_times;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] > horizon + 1e-12)
      throw InputError("output times must lie in [0, horizon]");
    if (i > 0 && times[i] <= times[i - 1]) throw InputError("output times must be increasing");
  }

  SolveResult res;
  res.policy.grid = psi.grid;
  res.policy.horizon = horizon;
  res.cfl_dt = horizon > 0.0 ? cfl_timestep(field, controls, psi.grid, config, horizon) : 0.0;
  const double dt_cap = std::min(res.cfl_dt > 0.0 ? res.cfl_dt : horizon,
                                 config.max_dt > 0.0 ? config.max_dt : horizon);

  double lo_bound = std::numeric_limits<double>::infinity();
  double hi_bound = -std::numeric_limits<double>::infinity();
  for (double x : psi.values) {
    lo_bound = std::min(lo_bound, x);
    hi_bound = std::max(hi_bound, x);
  }

  ValueField current = psi;
  current.t = 0.0;
  double t = 0.0;
  for (double target : times) {
    const double span = target - t;
    if (span > 1e-14) {
      const long n_steps = std::max<long>(1, static_cast<long>(std::ceil(span / dt_cap - 1e-12)));
      const double dt = span / static_cast<double>(n_steps);
      for (long s = 0; s < n_steps; ++s) {
        res.policy.step_times.push_back(t);
        StepResult step = step_explicit(current, field, controls, config, dt);
        res.policy.argmax.push_back(std::move(step.argmax));
        res.clamp_reads += step.clamp_reads;
        current = std::move(step.next);
        t += dt;
        ++res.steps;
      }
    }
    current.t = target;
    res.outputs.push_back(current);
  }

  for (const ValueField& out : res.outputs)
    for (double x : out.values)
      if (x < lo_bound - 1e-10 || x > hi_bound + 1e-10) res.max_principle_ok = false;
  return res;
}

RefineStudy refine_study(const CoefficientField& field, const ControlSet& controls,
                         const SpatialGrid& base_grid,
                         const std::function<double(const Vec&)>& psi,
                         const std::function<double(const Vec&, double)>& oracle, double horizon,
                         const SchemeConfig& config, int levels) {
  if (!oracle) throw InputError("refinement study needs an oracle");
  if (levels < 1) throw InputError("need at least one level");

  RefineStudy study;
  SpatialGrid grid = base_grid;
  for (int level = 0; level < levels; ++level) {
    const SolveResult res =
        solve(make_value_field(grid, psi), field, controls, horizon, {horizon}, config);
    RefineLevel entry;
    entry.dx = grid.spacing()[0];
    entry.dt = res.steps > 0 ? horizon / static_cast<double>(res.steps) : 0.0;
    const ValueField& u = res.outputs.back();
    for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
      if (!grid.is_interior_third(idx)) continue;
      entry.sup_error =
          std::max(entry.sup_error, std::abs(u.values[idx] - oracle(grid.node(idx), horizon)));
    }
    study.levels.push_back(entry);
    grid = grid.refined();
  }

  study.pass = true;
  for (std::size_t i = 0; i + 1 < study.levels.size(); ++i) {
    const double coarse = study.levels[i].sup_error;
    const double fine = study.levels[i + 1].sup_error;
    if (fine <= 1e-12 && coarse <= 1e-12) continue;  // rounding-noise floor
    if (!(fine * 1.5 <= coarse)) study.pass = false;
  }
  return study;
}

}  // namespace sslab
