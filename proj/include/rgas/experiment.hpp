#pragma once

#include <iosfwd>

#include "rgas/config.hpp"
#include "rgas/dynamics.hpp"
#include "rgas/good_trees.hpp"
#include "rgas/histogram.hpp"
#include "rgas/jump_process.hpp"

namespace rgas {

/// One report row: empirical-vs-ideal comparison at a given (epsilon, t).
struct ExperimentRow {
    double epsilon = 0.0;
    int N = 0;
    double t = 0.0;
    double tv_empirical_vs_ideal = 0.0;
    double tv_mc_error = 0.0;
    double good_tree_fraction = 0.0;
    double mean_collisions = 0.0;
    double zeta_theoretical = 0.0;
    double zeta_empirical = 0.0;
    int aborted_runs = 0;
};

/// Loss-only cross-check outcome at one epsilon: with the gain disabled the
/// empirical no-collision probability must match exp(-T lambda(v_gate)).
struct LossGateRow {
    double epsilon = 0.0;
    double expected = 0.0;
    double observed = 0.0;
    double allowance = 0.0; // 3 sigma binomial + 0.15 relative model bias
    bool passed = false;
};

struct ExperimentReport {
    std::vector<ExperimentRow> rows;
    std::vector<LossGateRow> gates;
    bool valid = true;
    std::string invalid_reason;
};

/// Runs the full sweep: per epsilon, the loss-only gate, then
/// realizations_per_eps full-dynamics realizations; compares the velocity
/// law at each t_eval against a jump-process reference (reference_factor
/// times more samples) in TV, with bootstrap error bars.
ExperimentReport run_experiment(const ExperimentConfig& config);

/// Fixed CSV header/field order of the report.
void write_report_csv(std::ostream& out, const ExperimentReport& report);

std::vector<VelocityHistogram> jump_reference_histograms(const ExperimentConfig& config);

} // namespace rgas
