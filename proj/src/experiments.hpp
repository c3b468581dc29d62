#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "generators.hpp"

namespace opseq {

// The six runnable experiments.
extern const std::vector<std::string> kExperimentNames;
bool is_experiment_name(const std::string& name);

struct ExperimentConfig {
    std::string experiment;          // must be one of kExperimentNames to run
    int dim = 8;
    int n_max = 100;
    std::uint64_t seed = 1;
    double tol = 1e-6;
    int k = 5;
    std::string rate = "geometric:1:0.8";
};

// Line-oriented `key = value` text; '#' starts a comment, blank lines are
// skipped. Unknown or duplicate keys, malformed values, and out-of-range
// settings are all collected and raised together as one ParseError.
ExperimentConfig parse_config(const std::string& text);

// Parses "harmonic:K", "geometric:K:r" or "table:v1,v2,..." (throws Error).
DecaySchedule parse_rate(const std::string& text);

struct ReportRow {
    int n;
    double norm_residual;
    double strong_residual_max;
    double weak_residual_max;
    int flag;
};

struct ReportBundle {
    std::vector<std::pair<std::string, std::string>> header;
    std::vector<ReportRow> rows;
    std::vector<std::pair<std::string, std::string>> summary;
    bool passed = true;
};

// Runs the configured experiment; deterministic for a fixed config.
ReportBundle run_experiment(const ExperimentConfig& cfg);

// Renders the fixed CSV schema: '# key: value' header lines, the column
// header `n,norm_residual,strong_residual_max,weak_residual_max,flag`,
// one row per checkpoint with %.17g floats, then '# ' summary lines
// (ending with '# passed: ...'). Byte-identical across reruns.
std::string emit_csv(const ReportBundle& bundle);

std::string fmt_double(double v);  // %.17g

}  // namespace opseq
