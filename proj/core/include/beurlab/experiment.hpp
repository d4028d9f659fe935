#pragma once

#include <string>
#include <vector>

#include "beurlab/config.hpp"
#include "beurlab/report.hpp"

namespace beurlab {

/// popa-check, kernel-check, timechange, prop1, limit, limsup, hdagger,
/// heiberg-seneta, tauberian, beck, represent, riesz.
const std::vector<std::string>& experiment_commands();

/// Runs one experiment. ConfigError propagates; any other library error is
/// captured as verdict = aborted with an "error" table.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace beurlab
