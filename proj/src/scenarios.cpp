#include "sslab/scenarios.hpp"

#include <cmath>

#include "sslab/quadrature.hpp"

namespace sslab {

const char* psi_tag_name(PsiTag tag) {
  switch (tag) {
    case PsiTag::Constant: return "constant";
    case PsiTag::Square: return "square";
    case PsiTag::NegSquare: return "neg_square";
    case PsiTag::Tanh: return "tanh";
    case PsiTag::OneMinusExpNeg: return "one_minus_exp_neg";
    case PsiTag::Bump: return "bump";
  }
  return "constant";
}

PsiTag psi_tag_from_name(const std::string& name) {
  for (PsiTag tag : {PsiTag::Constant, PsiTag::Square, PsiTag::NegSquare, PsiTag::Tanh,
                     PsiTag::OneMinusExpNeg, PsiTag::Bump})
    if (name == psi_tag_name(tag)) return tag;
  throw InputError("unknown psi tag: " + name);
}

double eval_psi(PsiTag tag, const Vec& x) {
  switch (tag) {
    case PsiTag::Constant: return 1.0;
    case PsiTag::Square: return dot(x, x);
    case PsiTag::NegSquare: return -dot(x, x);
    case PsiTag::Tanh: return std::tanh(x[0]);
    case PsiTag::OneMinusExpNeg: return 1.0 - std::exp(-x[0]);
    case PsiTag::Bump: {
      const double r2 = dot(x, x);
      if (r2 >= 1.0) return 0.0;
      return std::exp(1.0 - 1.0 / (1.0 - r2));
    }
  }
  return 0.0;
}

std::function<double(const Vec&)> psi_function(PsiTag tag) {
  return [tag](const Vec& x) { return eval_psi(tag, x); };
}

namespace {

double scalar_truncation(double y) { return y * std::min(1.0, 1.0 / std::abs(y)); }

bool tag_increasing(PsiTag tag) {
  return tag == PsiTag::Tanh || tag == PsiTag::OneMinusExpNeg;
}

SpatialGrid grid1d(double lo, double hi, int n) {
  SpatialGrid g;
  g.dim = 1;
  g.lo = {lo};
  g.hi = {hi};
  g.n = {n};
  return g;
}

double require(const std::map<std::string, double>& params, const char* key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown(const std::map<std::string, double>& params,
                    const std::vector<ParamSpec>& specs, const std::string& scenario) {
  for (const auto& [key, value] : params) {
    (void)value;
    bool known = false;
    for (const auto& spec : specs)
      if (spec.key == key) known = true;
    if (!known) throw InputError("unknown parameter '" + key + "' for scenario " + scenario);
  }
}

// ---------------------------------------------------------------------
// linear_levy: single control, constant coefficients, one jump atom.
// ---------------------------------------------------------------------

const std::vector<ParamSpec> kLinearLevyParams = {
    {"drift", 0.05, "constant drift"},
    {"sigma", 0.4, "constant volatility"},
    {"jump_rate", 0.3, "atom intensity"},
    {"jump_size", 0.5, "atom jump amplitude"},
};

Scenario make_linear_levy(const std::map<std::string, double>& params) {
  reject_unknown(params, kLinearLevyParams, "linear_levy");
  const double b0 = require(params, "drift", 0.05);
  const double s0 = require(params, "sigma", 0.4);
  const double rate = require(params, "jump_rate", 0.3);
  const double jump = require(params, "jump_size", 0.5);
  if (s0 < 0.0 || rate < 0.0) throw InputError("sigma and jump_rate must be >= 0");
  if (jump <= 0.0) throw InputError("jump_size must be positive");

  Scenario sc;
  sc.name = "linear_levy";
  sc.controls.points = {{0.0}};
  sc.controls.labels = {"f0"};
  sc.field.dim = 1;
  sc.field.noise_dim = 1;
  sc.field.n_controls = 1;
  sc.field.drift = [b0](int, const Vec&) { return Vec{b0}; };
  sc.field.sigma = [s0](int, const Vec&) { Mat m(1, 1); m(0, 0) = s0; return m; };
  sc.field.jump = [](int, const Vec&, const Vec& z) { return z; };
  sc.field.kernel.atoms = {rate > 0.0 ? std::vector<JumpAtom>{{{jump}, rate}}
                                      : std::vector<JumpAtom>{}};
  sc.field.kernel.gamma = [](const Vec& z) { return std::abs(z[0]); };
  sc.field.declared_lipschitz = DeclaredLipschitz{0.0, 0.0, 0.0};

  sc.default_grid = grid1d(-4.0, 4.0, 201);
  sc.default_horizon = 0.5;
  sc.default_x0 = {0.0};
  sc.default_psi = PsiTag::Tanh;
  sc.notes =
      "single control: the value collapses to a linear expectation; constant "
      "bounded coefficients, finite-activity kernel, symbol vanishes at infinity";

  sc.oracle = [b0, s0, rate, jump](PsiTag tag, const Vec& x0, double horizon)
      -> std::optional<double> {
    if (tag == PsiTag::Constant) return 1.0;
    const double base = x0[0] + (b0 - rate * scalar_truncation(jump)) * horizon;
    const double stddev = s0 * std::sqrt(horizon);
    auto fn = [tag](double y) { return eval_psi(tag, Vec{y}); };
    return expectation_poisson_gaussian(fn, rate * horizon, jump, base, stddev);
  };
  return sc;
}

// ---------------------------------------------------------------------
// g_brownian: volatility band, no jumps.
// ---------------------------------------------------------------------

const std::vector<ParamSpec> kGBrownianParams = {
    {"sigma_lo", 0.5, "lower volatility"},
    {"sigma_hi", 1.0, "upper volatility"},
};

Scenario make_g_brownian(const std::map<std::string, double>& params) {
  reject_unknown(params, kGBrownianParams, "g_brownian");
  const double lo = require(params, "sigma_lo", 0.5);
  const double hi = require(params, "sigma_hi", 1.0);
  if (!(lo > 0.0) || !(hi > 0.0)) throw InputError("volatilities must be positive");
  if (lo > hi) throw InputError("sigma_lo must not exceed sigma_hi");

  Scenario sc;
  sc.name = "g_brownian";
  sc.controls.points = {{lo}, {hi}};
  sc.controls.labels = {"sigma_lo", "sigma_hi"};
  sc.field.dim = 1;
  sc.field.noise_dim = 1;
  sc.field.n_controls = 2;
  sc.field.drift = [](int, const Vec&) { return Vec{0.0}; };
  const Vec sigmas{lo, hi};
  sc.field.sigma = [sigmas](int f, const Vec&) {
    Mat m(1, 1);
    m(0, 0) = sigmas[static_cast<std::size_t>(f)];
    return m;
  };
  sc.field.jump = [](int, const Vec&, const Vec& z) { return z; };
  sc.field.kernel.atoms = {{}, {}};
  sc.field.kernel.gamma = [](const Vec& z) { return std::abs(z[0]); };
  sc.field.declared_lipschitz = DeclaredLipschitz{0.0, 0.0, 0.0};

  sc.default_grid = grid1d(-4.0, 4.0, 201);
  sc.default_horizon = 0.25;
  sc.default_x0 = {0.0};
  sc.default_psi = PsiTag::Square;
  sc.notes =
      "volatility band without jumps; bounded coefficients, symbol decays like "
      "1/r^2 at infinity; convex data ride the upper volatility, concave the lower";

  sc.oracle = [lo, hi](PsiTag tag, const Vec& x0, double horizon) -> std::optional<double> {
    switch (tag) {
      case PsiTag::Constant: return 1.0;
      case PsiTag::Square: return x0[0] * x0[0] + hi * hi * horizon;
      case PsiTag::NegSquare: return -(x0[0] * x0[0] + lo * lo * horizon);
      default: return std::nullopt;
    }
  };
  return sc;
}

// ---------------------------------------------------------------------
// drift_band: drift uncertainty with fixed volatility.
// ---------------------------------------------------------------------

const std::vector<ParamSpec> kDriftBandParams = {
    {"b_lo", -1.0, "lower drift"},
    {"b_hi", 1.0, "upper drift"},
    {"sigma", 0.5, "fixed volatility"},
};

Scenario make_drift_band(const std::map<std::string, double>& params) {
  reject_unknown(params, kDriftBandParams, "drift_band");
  const double lo = require(params, "b_lo", -1.0);
  const double hi = require(params, "b_hi", 1.0);
  const double s0 = require(params, "sigma", 0.5);
  if (!(lo < hi)) throw InputError("b_lo must be below b_hi");
  if (s0 < 0.0) throw InputError("sigma must be >= 0");

  Scenario sc;
  sc.name = "drift_band";
  const double mid = 0.5 * (lo + hi);
  sc.controls.points = {{lo}, {mid}, {hi}};
  sc.controls.labels = {"b_lo", "b_mid", "b_hi"};
  sc.field.dim = 1;
  sc.field.noise_dim = 1;
  sc.field.n_controls = 3;
  const Vec drifts{lo, mid, hi};
  sc.field.drift = [drifts](int f, const Vec&) { return Vec{drifts[static_cast<std::size_t>(f)]}; };
  sc.field.sigma = [s0](int, const Vec&) { Mat m(1, 1); m(0, 0) = s0; return m; };
  sc.field.jump = [](int, const Vec&, const Vec& z) { return z; };
  sc.field.kernel.atoms = {{}, {}, {}};
  sc.field.kernel.gamma = [](const Vec& z) { return std::abs(z[0]); };
  sc.field.declared_lipschitz = DeclaredLipschitz{0.0, 0.0, 0.0};

  sc.default_grid = grid1d(-4.0, 4.0, 201);
  sc.default_horizon = 0.5;
  sc.default_x0 = {0.0};
  sc.default_psi = PsiTag::Tanh;
  sc.notes =
      "drift band with fixed volatility and no jumps; bounded coefficients, "
      "symbol decays like 1/r; monotone data ride the extreme drift";

  sc.oracle = [hi, s0](PsiTag tag, const Vec& x0, double horizon) -> std::optional<double> {
    if (tag == PsiTag::Constant) return 1.0;
    if (!tag_increasing(tag)) return std::nullopt;
    auto fn = [tag](double y) { return eval_psi(tag, Vec{y}); };
    return expectation_gaussian(fn, x0[0] + hi * horizon, s0 * std::sqrt(horizon));
  };
  return sc;
}

// ---------------------------------------------------------------------
// poisson_band: jump-intensity uncertainty, unit jumps, the drift cancels
// the jump compensator so paths are pure Poisson counts.
// ---------------------------------------------------------------------

const std::vector<ParamSpec> kPoissonBandParams = {
    {"lambda_lo", 0.5, "lower intensity"},
    {"lambda_hi", 1.5, "upper intensity"},
};

Scenario make_poisson_band(const std::map<std::string, double>& params) {
  reject_unknown(params, kPoissonBandParams, "poisson_band");
  const double lo = require(params, "lambda_lo", 0.5);
  const double hi = require(params, "lambda_hi", 1.5);
  if (!(lo > 0.0)) throw InputError("lambda_lo must be positive");
  if (lo > hi) throw InputError("lambda_lo must not exceed lambda_hi");

  Scenario sc;
  sc.name = "poisson_band";
  sc.controls.points = {{lo}, {hi}};
  sc.controls.labels = {"lambda_lo", "lambda_hi"};
  sc.field.dim = 1;
  sc.field.noise_dim = 1;
  sc.field.n_controls = 2;
  const Vec rates{lo, hi};
  sc.field.drift = [rates](int f, const Vec&) { return Vec{rates[static_cast<std::size_t>(f)]}; };
  sc.field.sigma = [](int, const Vec&) { return Mat(1, 1); };
  sc.field.jump = [](int, const Vec&, const Vec& z) { return z; };
  sc.field.kernel.atoms = {std::vector<JumpAtom>{{{1.0}, lo}}, std::vector<JumpAtom>{{{1.0}, hi}}};
  sc.field.kernel.gamma = [](const Vec& z) { return std::abs(z[0]); };
  sc.field.declared_lipschitz = DeclaredLipschitz{0.0, 0.0, 0.0};

  sc.default_grid = grid1d(-4.0, 8.0, 241);
  sc.default_horizon = 1.0;
  sc.default_x0 = {0.0};
  sc.default_psi = PsiTag::OneMinusExpNeg;
  sc.notes =
      "unit-jump intensity band; the drift offsets the jump compensator, so "
      "each control yields a Poisson count process; gamma = |z| dominates "
      "amplitudes and tail mass vanishes beyond the single atom";

  sc.oracle = [hi](PsiTag tag, const Vec& x0, double horizon) -> std::optional<double> {
    if (tag == PsiTag::Constant) return 1.0;
    if (!tag_increasing(tag)) return std::nullopt;
    auto fn = [tag](double y) { return eval_psi(tag, Vec{y}); };
    return expectation_poisson(fn, hi * horizon, 1.0, x0[0]);
  };
  return sc;
}

// ---------------------------------------------------------------------
// mixed_jump_diffusion: state-dependent jump amplitudes modulated by the
// control, plus fixed diffusion. No oracle; used for cross-engine checks.
// ---------------------------------------------------------------------

const std::vector<ParamSpec> kMixedParams = {
    {"f_lo", 0.5, "lower amplitude factor"},
    {"f_hi", 1.0, "upper amplitude factor"},
    {"sigma", 0.3, "fixed volatility"},
    {"jump_rate", 0.6, "intensity of each of the two atoms"},
    {"jump_size", 0.5, "mark magnitude of the two atoms"},
    {"small_jump_var", 0.0, "moment-matched variance of discarded small jumps"},
};

Scenario make_mixed_jump_diffusion(const std::map<std::string, double>& params) {
  reject_unknown(params, kMixedParams, "mixed_jump_diffusion");
  const double f_lo = require(params, "f_lo", 0.5);
  const double f_hi = require(params, "f_hi", 1.0);
  const double s0 = require(params, "sigma", 0.3);
  const double rate = require(params, "jump_rate", 0.6);
  const double size = require(params, "jump_size", 0.5);
  const double sj_var = require(params, "small_jump_var", 0.0);
  if (!(f_lo > 0.0) || f_lo > f_hi) throw InputError("need 0 < f_lo <= f_hi");
  if (s0 < 0.0 || rate < 0.0 || sj_var < 0.0) throw InputError("negative parameter");
  if (!(size > 0.0)) throw InputError("jump_size must be positive");

  Scenario sc;
  sc.name = "mixed_jump_diffusion";
  sc.controls.points = {{f_lo}, {f_hi}};
  sc.controls.labels = {"f_lo", "f_hi"};
  sc.field.dim = 1;
  sc.field.noise_dim = 1;
  sc.field.n_controls = 2;
  sc.field.drift = [](int, const Vec&) { return Vec{0.0}; };
  sc.field.sigma = [s0](int, const Vec&) { Mat m(1, 1); m(0, 0) = s0; return m; };
  const Vec factors{f_lo, f_hi};
  sc.field.jump = [factors](int f, const Vec& x, const Vec& z) {
    return Vec{factors[static_cast<std::size_t>(f)] * z[0] * (1.0 + std::tanh(x[0]))};
  };
  const std::vector<JumpAtom> atoms = {{{size}, rate}, {{-size}, rate}};
  sc.field.kernel.atoms = {atoms, atoms};
  sc.field.kernel.gamma = [f_hi](const Vec& z) { return 2.0 * f_hi * std::abs(z[0]); };
  if (sj_var > 0.0) {
    Mat m(1, 1);
    m(0, 0) = sj_var;
    sc.field.kernel.small_jump_second_moment = {m, m};
  }
  sc.field.declared_lipschitz = DeclaredLipschitz{2.0 * rate * size * f_hi, 0.0, 0.5};

  sc.default_grid = grid1d(-4.0, 4.0, 201);
  sc.default_horizon = 0.5;
  sc.default_x0 = {0.0};
  sc.default_psi = PsiTag::Tanh;
  sc.notes =
      "state-dependent jump amplitude f*z*(1+tanh(x)) with two atoms; amplitude "
      "is Lipschitz in the state with a gamma-factored constant and obeys the "
      "gamma growth bound; no oracle, used for cross-engine agreement";
  return sc;
}

}  // namespace

std::vector<ScenarioSchema> list_scenarios() {
  return {
      {"linear_levy", kLinearLevyParams,
       "single-control jump diffusion (linear baseline)"},
      {"g_brownian", kGBrownianParams, "volatility uncertainty, no jumps"},
      {"drift_band", kDriftBandParams, "drift uncertainty, fixed volatility"},
      {"poisson_band", kPoissonBandParams, "jump-intensity uncertainty, unit jumps"},
      {"mixed_jump_diffusion", kMixedParams,
       "controlled state-dependent jumps plus diffusion"},
  };
}

Scenario get_scenario(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "linear_levy") return make_linear_levy(params);
  if (name == "g_brownian") return make_g_brownian(params);
  if (name == "drift_band") return make_drift_band(params);
  if (name == "poisson_band") return make_poisson_band(params);
  if (name == "mixed_jump_diffusion") return make_mixed_jump_diffusion(params);
  throw InputError("unknown scenario: " + name);
}

RefineStudy refine_study(const Scenario& scenario, PsiTag tag, int levels,
                         const SchemeConfig& config) {
  if (!scenario.oracle_value(tag, scenario.default_x0, scenario.default_horizon))
    throw InputError("refinement study unsupported: scenario has no oracle for tag " +
                     std::string(psi_tag_name(tag)));
  auto oracle = [&scenario, tag](const Vec& x, double horizon) {
    return *scenario.oracle_value(tag, x, horizon);
  };
  return refine_study(scenario.field, scenario.controls, scenario.default_grid, psi_function(tag),
                      oracle, scenario.default_horizon, config, levels);
}

}  // namespace sslab
