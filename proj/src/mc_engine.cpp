#include "sslab/mc_engine.hpp"

#include <algorithm>
#include <cmath>

#include "sslab/parallel.hpp"
#include "sslab/rng.hpp"

namespace sslab {

MarkovPolicy MarkovPolicy::constant(int control, int n_steps, double dt) {
  MarkovPolicy p;
  p.n_steps = n_steps;
  p.dt = dt;
  p.default_control = static_cast<std::uint16_t>(control);
  return p;
}

int MarkovPolicy::control_at(int step, const Vec& x) const {
  if (!cells) return default_control;
  const int s = std::clamp(step, 0, static_cast<int>(choice.size()) - 1);
  const std::size_t cell = cells->nearest_node(x);  // clamps outside the box
  return choice[static_cast<std::size_t>(s)][cell];
}

void MarkovPolicy::validate(int n_controls) const {
  if (n_steps < 1 || !(dt > 0.0)) throw InputError("policy needs n_steps >= 1 and dt > 0");
  if (default_control >= n_controls) throw InputError("policy control index out of range");
  for (const auto& layer : choice)
    for (std::uint16_t c : layer)
      if (c >= n_controls) throw InputError("policy control index out of range");
}

namespace {

struct PathScratch {
  Vec x;
  Vec noise;
  std::vector<Mat> small_jump_chol;  // per control, empty when no mass
};

PathEnd run_path(const CoefficientField& field, const MarkovPolicy& policy, const Vec& x0,
                 double horizon, std::uint64_t seed, std::uint64_t path_index,
                 const std::vector<Mat>* small_chol) {
  PathEnd end;
  Vec x = x0;
  end.sup_deviation = 0.0;
  double t = 0.0;
  const TruncationFunction h;

  for (int step = 0; step < policy.n_steps && t < horizon - 1e-14; ++step) {
    const double dt = std::min(policy.dt, horizon - t);
    const int f = policy.control_at(step, x);
    SubstreamRng rng(seed, path_index, static_cast<std::uint64_t>(step));

    Vec dx = scale(field.drift(f, x), dt);

    const Mat sg = field.sigma(f, x);
    const double sqrt_dt = std::sqrt(dt);
    if (!sg.empty()) {
      Vec xi(static_cast<std::size_t>(field.noise_dim));
      for (auto& v : xi) v = rng.normal();
      axpy(dx, sqrt_dt, mat_vec(sg, xi));
    }

    for (const JumpAtom& atom : field.kernel.atoms[static_cast<std::size_t>(f)]) {
      const Vec k = field.jump(f, x, atom.z);
      const long count = rng.poisson(atom.w * dt);
      if (count > 0) axpy(dx, static_cast<double>(count), k);
      axpy(dx, -atom.w * dt, h(k));  // compensator, truncation convention
    }

    if (small_chol && !(*small_chol)[static_cast<std::size_t>(f)].empty()) {
      Vec zeta(static_cast<std::size_t>(field.dim));
      for (auto& v : zeta) v = rng.normal();
      axpy(dx, sqrt_dt, mat_vec((*small_chol)[static_cast<std::size_t>(f)], zeta));
    }

    x = add(x, dx);
    t += dt;
    end.sup_deviation = std::max(end.sup_deviation, norm(sub(x, x0)));
  }
  end.terminal = std::move(x);
  return end;
}

std::vector<Mat> small_jump_factors(const CoefficientField& field) {
  std::vector<Mat> factors(static_cast<std::size_t>(field.n_controls));
  if (!field.kernel.has_small_jump_mass()) return factors;
  for (int f = 0; f < field.n_controls; ++f) {
    const Mat& m = field.small_jump_matrix(f);
    bool nonzero = false;
    for (double v : m.data) nonzero |= (v != 0.0);
    if (nonzero) factors[static_cast<std::size_t>(f)] = cholesky_psd(m);
  }
  return factors;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) return 0.0;
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const std::size_t i = static_cast<std::size_t>(pos);
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return (1.0 - frac) * sorted[i] + frac * sorted[i + 1];
}

}  // namespace

PathEnd simulate_path(const CoefficientField& field, const MarkovPolicy& policy, const Vec& x0,
                      double horizon, std::uint64_t seed, std::uint64_t path_index) {
  if (!(policy.dt > 0.0)) throw InputError("policy dt must be positive");
  if (policy.span() < horizon - 1e-12) throw InputError("policy time grid must cover the horizon");
  field.check_state(x0);
  const auto factors = small_jump_factors(field);
  return run_path(field, policy, x0, horizon, seed, path_index, &factors);
}

SimulationResult estimate_value(const CoefficientField& field, const MarkovPolicy& policy,
                                const std::function<double(const Vec&)>& psi, const Vec& x0,
                                double horizon, long n_paths, std::uint64_t seed) {
  if (n_paths < 100) throw InputError("need at least 100 paths");
  if (!(policy.dt > 0.0)) throw InputError("policy dt must be positive");
  if (policy.span() < horizon - 1e-12) throw InputError("policy time grid must cover the horizon");
  field.check_state(x0);
  policy.validate(field.n_controls);

  const auto factors = small_jump_factors(field);
  std::vector<double> values(static_cast<std::size_t>(n_paths));
  std::vector<double> excursions(static_cast<std::size_t>(n_paths));

  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const PathEnd e = run_path(field, policy, x0, horizon, seed, p, &factors);
      values[p] = psi(e.terminal);
      excursions[p] = e.sup_deviation;
    }
  });

  SimulationResult res;
  res.n_paths = n_paths;
  res.mean = pairwise_sum(values) / static_cast<double>(n_paths);
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - res.mean;
    sq[i] = d * d;
  }
  if (n_paths > 1) {
    const double var = pairwise_sum(sq) / static_cast<double>(n_paths - 1);
    res.stderr_ = std::sqrt(var / static_cast<double>(n_paths));
  }

  std::sort(excursions.begin(), excursions.end());
  for (double p : {0.5, 0.9, 0.99, 1.0})
    res.excursion_quantiles.emplace_back(p, quantile_sorted(excursions, p));
  return res;
}

PolicyScan best_constant_policy(const CoefficientField& field, const ControlSet& controls,
                                const std::function<double(const Vec&)>& psi, const Vec& x0,
                                double horizon, long n_paths, std::uint64_t seed, int n_steps) {
  controls.validate();
  PolicyScan scan;
  double best_mean = 0.0;
  for (int f = 0; f < controls.size(); ++f) {
    const MarkovPolicy policy =
        MarkovPolicy::constant(f, n_steps, horizon / static_cast<double>(n_steps));
    // common random numbers: the same (seed, path) substreams drive every control
    SimulationResult r = estimate_value(field, policy, psi, x0, horizon, n_paths, seed);
    if (f == 0 || r.mean > best_mean) {
      best_mean = r.mean;
      scan.best = f;
    }
    scan.per_control.push_back(std::move(r));
  }
  return scan;
}

MarkovPolicy extract_policy_from_pde(const PolicyRecord& record, int n_steps) {
  if (record.argmax.empty()) throw InputError("policy record is empty");
  if (n_steps < 1) throw InputError("need n_steps >= 1");

  MarkovPolicy policy;
  policy.n_steps = n_steps;
  policy.dt = record.horizon / static_cast<double>(n_steps);
  policy.cells = record.grid;
  policy.choice.resize(static_cast<std::size_t>(n_steps));

  for (int j = 0; j < n_steps; ++j) {
    // remaining time midway through forward step j
    const double remaining = record.horizon - (static_cast<double>(j) + 0.5) * policy.dt;
    std::size_t layer = 0;
    for (std::size_t m = 0; m < record.step_times.size(); ++m)
      if (record.step_times[m] <= remaining) layer = m;
    policy.choice[static_cast<std::size_t>(j)] = record.argmax[layer];
  }
  return policy;
}

ExitTable exit_probability(const CoefficientField& field, const MarkovPolicy& policy,
                           const Vec& x0, const std::vector<double>& r_values, double u,
                           long n_paths, std::uint64_t seed) {
  for (std::size_t i = 0; i + 1 < r_values.size(); ++i)
    if (!(r_values[i] < r_values[i + 1])) throw InputError("radii must be increasing");
  if (!(policy.dt > 0.0)) throw InputError("policy dt must be positive");
  if (policy.span() < u - 1e-12) throw InputError("policy time grid must cover the horizon");
  field.check_state(x0);

  const auto factors = small_jump_factors(field);
  std::vector<double> sup_dev(static_cast<std::size_t>(n_paths));
  parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p)
      sup_dev[p] = run_path(field, policy, x0, u, seed, p, &factors).sup_deviation;
  });

  ExitTable table;
  table.r = r_values;
  table.n_paths = n_paths;
  for (double r : r_values) {
    long hits = 0;
    for (double s : sup_dev)
      if (s > r) ++hits;
    const double p = static_cast<double>(hits) / static_cast<double>(n_paths);
    table.prob.push_back(p);
    table.stderr_.push_back(std::sqrt(p * (1.0 - p) / static_cast<double>(n_paths)));
  }
  return table;
}

}  // namespace sslab
