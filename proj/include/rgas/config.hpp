#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rgas/laws.hpp"

namespace rgas {

/// JSON law specs:
///   g0: {"kind":"maxwellian","sigma":1.0}
///       {"kind":"uniform_ball","radius":1.0}
///       {"kind":"tabulated_radial","r":[...],"g":[...],"tail":"compact"|
///        {"power":6.0}}
///   f0: {"spatial":{"kind":"uniform"}|{"kind":"point","x":[..]},
///        "velocity":{"kind":"point","v":[..]}|{"kind":"maxwellian","sigma":s}|
///                   {"kind":"tabulated_radial",...}}
BackgroundLaw background_law_from_json(const nlohmann::json& j);
nlohmann::json background_law_to_json(const BackgroundLaw& law);
InitialLaw initial_law_from_json(const nlohmann::json& j);
nlohmann::json initial_law_to_json(const InitialLaw& law);

/// Full experiment sweep configuration (see README for the schema).
struct ExperimentConfig {
    std::vector<double> epsilons{0.1, 0.075, 0.05};
    int realizations_per_eps = 2000;
    std::vector<double> t_eval{1.0};
    double T = 1.0;
    InitialLaw f0 = InitialLaw::uniform_point_velocity({0.1, 0.0, 0.0});
    BackgroundLaw g0 = BackgroundLaw::maxwellian(0.1);
    int bins_per_axis = 20;
    double v_max = 1.0;
    std::uint64_t seed = 1;
    int workers = 0;             // 0: hardware concurrency
    int reference_factor = 10;   // reference sample count = factor * realizations
    int bootstrap_resamples = 200;
    int gate_runs = 2000;        // loss-only cross-check realizations per eps

    void validate() const;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);
ExperimentConfig load_experiment_config(const std::string& path);

} // namespace rgas
