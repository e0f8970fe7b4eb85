#pragma once

// Experiment configuration: JSON schema parsing and validation for the CLI.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sanovlab/classical.hpp"
#include "sanovlab/quantum.hpp"

namespace sanovlab {

// Malformed or invalid configuration; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { ClassicalSanov, QuantumSanov, NeymanPearson, Example1, Example2, HiaiPetz };

std::string kind_name(ExperimentKind kind);

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::ClassicalSanov;
    nlohmann::json echo; // the raw document, reproduced in reports
    std::uint64_t seed = 1;
    Eigen::Index cap = kDefaultDimCap;
    double grouping_tol = 1e-9;

    std::vector<std::int64_t> n_list;
    PowerLawSchedule schedule;

    // classical-sanov
    std::vector<Distribution> omega;
    std::optional<Distribution> q;

    // quantum-sanov / neyman-pearson
    std::vector<DensityOperator> psi_set;
    std::optional<DensityOperator> phi;
    int l = 1;
    double epsilon = 0.1;
    double delta = kInf; // optional slack target for the block length

    // example1
    double overlap_sq = 0.01;
    std::vector<double> deltas{1.0, 0.5, 0.1, 0.01};
    int entropy_k_max = 6;

    // example2
    double big_t = 0.5235987755982988; // pi/6
    int trials = 10000;

    // hiai-petz
    int pairs = 100;
    std::vector<int> l_list{1, 2, 3};
};

// Parses a state specification: {"bloch":[x,y,z]}, {"diag":[...]}, or
// {"re":[[...]], "im":[[...]]} with "im" optional.
DensityOperator parse_state(const nlohmann::json& j, const std::string& where);

// Loads and fully validates a configuration file. Parse failures carry
// line-level positions; invariant violations name the offending quantity.
ExperimentConfig load_config(const std::string& path);

} // namespace sanovlab
