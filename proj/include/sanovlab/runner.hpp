#pragma once

// Dispatches a validated configuration to the experiment modules and
// assembles the report with every checked inequality.

#include "sanovlab/config.hpp"
#include "sanovlab/report.hpp"

namespace sanovlab {

ExperimentReport run_experiment(const ExperimentConfig& cfg, int threads = 1);

} // namespace sanovlab
