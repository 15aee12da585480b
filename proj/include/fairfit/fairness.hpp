#pragma once

#include <Eigen/Core>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fairfit/glm.hpp"

namespace fairfit {

// Snapshot handed to fairness evaluators: the fitted model plus the data it
// was fitted on and an unconstrained reference fit (lambda_alpha = 0, same
// lambda_beta) that normalizing definitions such as if-berk require.
struct FairnessInput {
  const Family& family;
  const Response& y;
  const Eigen::MatrixXd& S;
  const Eigen::MatrixXd& U;
  const CoefficientSet& coef;
  const FitStats& stats;
  const CoefficientSet& ref_coef;
  const FitStats& ref_stats;
};

// Must contain "value" in [0,1]; extra entries are kept for built-ins only.
using FairnessRecord = std::map<std::string, double>;

struct FairnessDefinition {
  std::string name;
  std::function<FairnessRecord(const FairnessInput&)> evaluator;
  bool builtin = false;
};

FairnessRecord sp_komiyama(const FairnessInput& in);
FairnessRecord eo_komiyama(const FairnessInput& in);
FairnessRecord if_berk(const FairnessInput& in);
FairnessRecord max_corr(const FairnessInput& in);

// sp-komiyama, eo-komiyama, if-berk, max-corr
FairnessDefinition builtin_definition(const std::string& name);
std::vector<std::string> builtin_definition_names();

// Checked evaluation: requires a finite "value"; values outside [0,1] by
// less than 1e-8 are clamped with a warning, anything worse is a contract
// error. Extra record entries survive only for built-in definitions.
double evaluate(const FairnessDefinition& def, const FairnessInput& in,
                FairnessRecord* record = nullptr,
                std::vector<std::string>* warnings = nullptr);

}  // namespace fairfit
