#pragma once

// Registry of bundled coefficient families with known oracles: diffusion
// uncertainty, drift uncertainty, jump-intensity uncertainty, a mixed
// state-dependent jump family, and a linear single-control baseline.
// Oracles are closed forms or quadratures, independent of the value
// engines they calibrate.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sslab/coefficients.hpp"
#include "sslab/pide_solver.hpp"

namespace sslab {

enum class PsiTag { Constant, Square, NegSquare, Tanh, OneMinusExpNeg, Bump };

const char* psi_tag_name(PsiTag tag);
PsiTag psi_tag_from_name(const std::string& name);
double eval_psi(PsiTag tag, const Vec& x);  // bump has support radius 1
std::function<double(const Vec&)> psi_function(PsiTag tag);

struct Scenario {
  std::string name;
  CoefficientField field;
  ControlSet controls;
  SpatialGrid default_grid;
  double default_horizon = 0.5;
  Vec default_x0;
  PsiTag default_psi = PsiTag::Tanh;
  double bump_support_radius = 1.0;
  std::string notes;

  // (psi tag, start, horizon) -> value, when this scenario knows one.
  std::function<std::optional<double>(PsiTag, const Vec&, double)> oracle;

  std::optional<double> oracle_value(PsiTag tag, const Vec& x0, double horizon) const {
    return oracle ? oracle(tag, x0, horizon) : std::nullopt;
  }
};

struct ParamSpec {
  std::string key;
  double default_value = 0.0;
  std::string description;
};

struct ScenarioSchema {
  std::string name;
  std::vector<ParamSpec> params;
  std::string notes;
};

// Stable registry order.
std::vector<ScenarioSchema> list_scenarios();

Scenario get_scenario(const std::string& name, const std::map<std::string, double>& params = {});

// Convergence study on a bundled scenario (requires an oracle for the tag).
RefineStudy refine_study(const Scenario& scenario, PsiTag tag, int levels,
                         const SchemeConfig& config = {});

}  // namespace sslab
