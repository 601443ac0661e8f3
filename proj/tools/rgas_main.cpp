#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rgas/collision_ops.hpp"
#include "rgas/config.hpp"
#include "rgas/experiment.hpp"
#include "rgas/svg.hpp"
#include "rgas/tree_density.hpp"

namespace fs = std::filesystem;
using namespace rgas;

namespace {

struct CommonOpts {
    std::string config_path;
    std::uint64_t seed = 1;
    int workers = 0;
    std::string out_dir;
};

ExperimentConfig load_or_default(const CommonOpts& opts) {
    ExperimentConfig cfg;
    if (!opts.config_path.empty()) cfg = load_experiment_config(opts.config_path);
    if (const char* env = std::getenv("RK_SEED")) cfg.seed = std::strtoull(env, nullptr, 10);
    return cfg;
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open for writing: " + path);
    return file;
}

int cmd_simulate(const CommonOpts& common, double epsilon, int n_runs, double T,
                 std::uint64_t seed, bool gain, int n_override, const std::string& out_path) {
    ExperimentConfig cfg = load_or_default(common);
    SimConfig sim;
    sim.epsilon = epsilon;
    sim.T = T;
    sim.gain_enabled = gain;
    if (n_override >= 0) sim.n_background = n_override;
    sim.validate();

    std::ofstream file;
    std::ostream& out = open_or_stdout(file, out_path);
    for (int r = 0; r < n_runs; ++r) {
        RngStream rng(seed, static_cast<std::uint64_t>(r));
        const auto outcome = run(sim, cfg.f0, cfg.g0, rng);
        out << tree_to_json_line(outcome.tree) << "\n";
    }
    return 0;
}

int cmd_jump(const CommonOpts& common, int n_samples, double T, std::uint64_t seed,
             const std::string& out_path, const std::string& hist_path, double v_max,
             int bins) {
    ExperimentConfig cfg = load_or_default(common);
    const RateCache rates(cfg.g0);
    VelocityHistogram hist(v_max, bins);

    std::ofstream file;
    std::ostream* out = nullptr;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot open for writing: " + out_path);
        out = &file;
    }
    for (int i = 0; i < n_samples; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i));
        const auto traj = jump_sample(cfg.f0, rates, T, rng);
        hist.add(traj.final_state.velocity);
        if (out) {
            nlohmann::json j;
            j["jumps"] = traj.jumps();
            nlohmann::json states = nlohmann::json::array();
            for (const auto& s : traj.states)
                states.push_back(nlohmann::json{{"t", s.t},
                                                {"x", {s.x.x, s.x.y, s.x.z}},
                                                {"v", {s.v.x, s.v.y, s.v.z}}});
            j["states"] = std::move(states);
            (*out) << j.dump() << "\n";
        }
    }
    if (!hist_path.empty()) save_histogram_file(hist_path, hist);
    return 0;
}

int cmd_solve(const CommonOpts& common, double t, int j_max, int bins, double v_max,
              int n_steps, const std::string& out_path) {
    ExperimentConfig cfg = load_or_default(common);
    if (cfg.f0.velocity_kind() == InitialLaw::VelocityKind::PointMass)
        throw std::runtime_error("solve: f0 must have a velocity density "
                                 "(point-mass velocities have no grid representation)");
    auto f0 = KineticDensity::from_function(
        v_max, bins, [&](const Vec3& v) { return cfg.f0.density({0.5, 0.5, 0.5}, v); });
    const auto result = duhamel_solve(f0, cfg.g0, t, j_max, n_steps);

    nlohmann::json j;
    j["t"] = t;
    j["j_max"] = j_max;
    j["level_masses"] = result.level_masses;
    j["partial_mass"] = result.partial_mass;
    j["mass_deficit"] = result.mass_deficit;
    std::cout << j.dump(2) << "\n";

    if (!out_path.empty()) {
        // store the grid as a scaled histogram-like CSV with a JSON header
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
        nlohmann::json header{{"kind", "velocity_density"},
                              {"bins", bins},
                              {"v_max", v_max},
                              {"mass", result.partial_mass}};
        out << header.dump() << "\n" << std::setprecision(12);
        const auto& vals = result.density.values();
        for (int ix = 0; ix < bins; ++ix)
            for (int iy = 0; iy < bins; ++iy) {
                for (int iz = 0; iz < bins; ++iz) {
                    const std::size_t k =
                        (static_cast<std::size_t>(ix) * bins + iy) * bins + iz;
                    out << vals[k] << (iz + 1 < bins ? ',' : '\n');
                }
            }
    }
    return 0;
}

int cmd_trees_classify(double epsilon, double v_eps, double m_eps,
                       const std::string& in_path, const std::string& out_path) {
    GoodTreeParams params = default_good_params(epsilon);
    if (v_eps > 0.0) params.V_eps = v_eps;
    if (m_eps > 0.0) params.M_eps = m_eps;

    std::ifstream in_file;
    std::istream* in = &std::cin;
    if (!in_path.empty()) {
        in_file.open(in_path);
        if (!in_file) throw std::runtime_error("cannot open: " + in_path);
        in = &in_file;
    }
    std::ofstream out_file;
    std::ostream& out = open_or_stdout(out_file, out_path);

    out << "epsilon,n,tau,max_speed,recollision_free,non_grazing,overlap_free,n_ok,"
           "speed_ok,good\n"
        << std::setprecision(12);
    const auto trees = read_trees_jsonl(*in);
    for (const auto& tree : trees) {
        const auto rep = classify(tree, params);
        out << epsilon << ',' << rep.n << ',' << rep.tau << ',' << rep.max_speed << ','
            << rep.recollision_free << ',' << rep.non_grazing << ',' << rep.overlap_free
            << ',' << rep.n_ok << ',' << rep.speed_ok << ',' << rep.good << '\n';
    }
    return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path) {
    const auto a = load_histogram_file(a_path);
    const auto b = load_histogram_file(b_path);
    std::cout << std::setprecision(12) << estimate_tv(a, b) << "\n";
    return 0;
}

int cmd_experiment(const CommonOpts& common, bool svg) {
    ExperimentConfig cfg = load_or_default(common);
    if (common.workers > 0) cfg.workers = common.workers;

    const auto report = run_experiment(cfg);

    const fs::path out_dir = common.out_dir.empty() ? fs::path(".") : fs::path(common.out_dir);
    fs::create_directories(out_dir);
    {
        std::ofstream out(out_dir / "report.csv");
        if (!out) throw std::runtime_error("cannot write report.csv");
        write_report_csv(out, report);
    }
    std::cout << "gate checks:\n" << std::setprecision(6);
    for (const auto& g : report.gates)
        std::cout << "  epsilon=" << g.epsilon << " expected=" << g.expected
                  << " observed=" << g.observed << " allowance=" << g.allowance
                  << (g.passed ? "  [ok]" : "  [FAILED]") << "\n";
    std::cout << (report.valid ? "experiment valid" : "EXPERIMENT INVALID: " + report.invalid_reason)
              << "\n";

    if (svg) {
        // one series per evaluation time
        std::vector<ChartSeries> tv_series, good_series;
        const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
        for (std::size_t ti = 0; ti < cfg.t_eval.size(); ++ti) {
            ChartSeries tv, good;
            tv.name = "t = " + std::to_string(cfg.t_eval[ti]);
            tv.color = colors[ti % 4];
            good = tv;
            for (const auto& row : report.rows) {
                if (row.t != cfg.t_eval[ti]) continue;
                tv.x.push_back(row.epsilon);
                tv.y.push_back(row.tv_empirical_vs_ideal);
                tv.y_err.push_back(row.tv_mc_error);
                good.x.push_back(row.epsilon);
                good.y.push_back(row.good_tree_fraction);
            }
            tv_series.push_back(std::move(tv));
            good_series.push_back(std::move(good));
        }
        write_line_chart_svg((out_dir / "tv_vs_eps.svg").string(),
                             "Empirical vs ideal velocity law", "epsilon", "TV distance",
                             tv_series);
        write_line_chart_svg((out_dir / "good_fraction_vs_eps.svg").string(),
                             "Good-tree fraction", "epsilon", "fraction", good_series);
    }
    return report.valid ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rgas: tagged-particle Rayleigh gas simulator and linear Boltzmann toolkit"};
    app.require_subcommand(1);

    CommonOpts common;
    app.add_option("--config", common.config_path, "JSON config file");
    app.add_option("--seed", common.seed, "base RNG seed (env RK_SEED overrides)");
    app.add_option("--workers", common.workers, "worker threads (env RK_WORKERS overrides)");
    app.add_option("--out", common.out_dir, "output directory");

    // simulate
    auto* sim = app.add_subcommand("simulate", "event-driven particle runs -> trees JSONL");
    double s_eps = 0.1, s_T = 1.0;
    int s_runs = 10, s_n = -1;
    std::uint64_t s_seed = 1;
    bool s_no_gain = false;
    std::string s_out;
    sim->add_option("--epsilon", s_eps, "particle diameter")->required();
    sim->add_option("--n-runs", s_runs, "number of realizations");
    sim->add_option("--T", s_T, "time horizon");
    sim->add_option("--seed", s_seed, "seed for this batch");
    sim->add_option("--n", s_n, "override background count (default: N = 1/eps^2)");
    sim->add_flag("--no-gain", s_no_gain, "absorb the tagged particle at its first collision");
    sim->add_option("--trees-out", s_out, "output JSONL path (default stdout)");

    // jump
    auto* jmp = app.add_subcommand("jump", "velocity-jump process samples");
    int j_samples = 1000, j_bins = 20;
    double j_T = 1.0, j_vmax = 6.0;
    std::uint64_t j_seed = 1;
    std::string j_out, j_hist;
    jmp->add_option("--n-samples", j_samples, "number of trajectories");
    jmp->add_option("--T", j_T, "time horizon");
    jmp->add_option("--seed", j_seed, "seed for this batch");
    jmp->add_option("--trajectories-out", j_out, "JSONL output path");
    jmp->add_option("--hist", j_hist, "write final-velocity histogram to this path");
    jmp->add_option("--v-max", j_vmax, "histogram extent");
    jmp->add_option("--bins", j_bins, "histogram bins per axis");

    // solve
    auto* slv = app.add_subcommand("solve", "Duhamel series on a velocity grid");
    double sv_t = 1.0, sv_vmax = 6.0;
    int sv_jmax = 12, sv_bins = 20, sv_steps = 64;
    std::string sv_out;
    slv->add_option("--t", sv_t, "evaluation time");
    slv->add_option("--j-max", sv_jmax, "number of collision levels");
    slv->add_option("--bins", sv_bins, "grid bins per axis");
    slv->add_option("--v-max", sv_vmax, "grid extent");
    slv->add_option("--time-steps", sv_steps, "midpoint nodes for the time integrals");
    slv->add_option("--grid-out", sv_out, "write the density grid to this path");

    // trees classify
    auto* trees = app.add_subcommand("trees", "collision tree utilities");
    auto* cls = trees->add_subcommand("classify", "good-tree classification -> CSV");
    double c_eps = 0.1, c_V = 0.0, c_M = 0.0;
    std::string c_in, c_out;
    cls->add_option("--epsilon", c_eps, "diameter for the classification")->required();
    cls->add_option("--V", c_V, "override speed cap V(eps)");
    cls->add_option("--M", c_M, "override collision-count cap M(eps)");
    cls->add_option("--trees", c_in, "input JSONL (default stdin)");
    cls->add_option("--csv-out", c_out, "output CSV (default stdout)");

    // compare
    auto* cmp = app.add_subcommand("compare", "TV distance between two histogram files");
    std::string a_path, b_path;
    cmp->add_option("a", a_path, "first histogram")->required();
    cmp->add_option("b", b_path, "second histogram")->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "full convergence sweep -> report.csv");
    bool e_svg = false;
    exp->add_flag("--svg", e_svg, "also write SVG charts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp")
            return app.exit(e);
        std::cerr << e.what() << "\n\n" << app.help() << "\n";
        return 2;
    }

    try {
        if (*sim)
            return cmd_simulate(common, s_eps, s_runs, s_T, s_seed, !s_no_gain, s_n, s_out);
        if (*jmp)
            return cmd_jump(common, j_samples, j_T, j_seed, j_out, j_hist, j_vmax, j_bins);
        if (*slv) return cmd_solve(common, sv_t, sv_jmax, sv_bins, sv_vmax, sv_steps, sv_out);
        if (*cls) return cmd_trees_classify(c_eps, c_V, c_M, c_in, c_out);
        if (*cmp) return cmd_compare(a_path, b_path);
        if (*exp) return cmd_experiment(common, e_svg);
        std::cerr << app.help() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
