// rho-lab: simulation and exact-enumeration toolkit for the rho/tau structure
// of iterated random k-ary maps.
//
// Exit codes: 0 success, 1 acceptance failure, 2 invalid arguments or
// missing/corrupt report inputs, 3 capacity limit exceeded.
#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rholab/acceptance.hpp"
#include "rholab/core.hpp"
#include "rholab/io.hpp"
#include "rholab/oracle.hpp"
#include "rholab/poisson_experiment.hpp"
#include "rholab/seqsim.hpp"
#include "rholab/theory.hpp"

namespace {

using rholab::io::ordered_json;

std::filesystem::path default_out_dir() {
    if (const char* env = std::getenv("RHO_LAB_OUT")) return env;
    return "out";
}

struct BatchArgs {
    std::uint32_t m = 0;
    std::uint32_t k = 2;
    std::uint64_t trials = 10000;
    std::uint64_t seed = rholab::acceptance::kDefaultMasterSeed;
    unsigned workers = 0;
    double x = -1;  // <0 = no tail threshold
    std::string out_dir = default_out_dir().string();
    bool csv = false;
};

void add_batch_options(CLI::App* cmd, BatchArgs& args) {
    cmd->add_option("--m", args.m, "alphabet size")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--k", args.k, "window size (arity)")->check(CLI::PositiveNumber);
    cmd->add_option("--trials", args.trials, "number of trials")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--workers", args.workers, "worker threads (0 = hardware)");
    cmd->add_option("--x", args.x, "tail threshold for P(tau^2/(2m^k) >= x)");
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_flag("--csv", args.csv, "write trial records as CSV instead of JSONL");
}

ordered_json run_config(const BatchArgs& args, bool hazard) {
    ordered_json cfg;
    cfg["m"] = args.m;
    cfg["k"] = args.k;
    cfg["trials"] = args.trials;
    cfg["master_seed"] = args.seed;
    cfg["hazard"] = hazard;
    if (args.x >= 0) cfg["x"] = args.x;
    return cfg;
}

int run_batch(const BatchArgs& args, bool hazard, const std::string& prefix) {
    const auto params = rholab::Params::create(args.m, args.k);
    rholab::seqsim::BatchOptions bo;
    bo.hazard = hazard;
    bo.workers = args.workers;
    if (args.x >= 0) bo.x_threshold = args.x;
    const auto batch = rholab::seqsim::batch_sample(params, args.trials, args.seed, bo);

    const std::filesystem::path dir = args.out_dir;
    std::ostringstream records;
    if (args.csv) {
        rholab::io::write_csv(records, batch.records, hazard);
        rholab::io::write_text_file(dir / (prefix + "_trials.csv"), records.str());
    } else {
        rholab::io::write_jsonl(records, batch.records, hazard);
        rholab::io::write_text_file(dir / (prefix + "_trials.jsonl"), records.str());
    }

    ordered_json summary;
    summary["tool_version"] = rholab::io::tool_version();
    summary["config"] = run_config(args, hazard);
    summary["tau"] = rholab::io::summary_json(batch.tau_summary);
    const std::string text = summary.dump(2) + "\n";
    rholab::io::write_text_file(dir / (prefix + "_summary.json"), text);
    std::cout << text;
    return 0;
}

int run_oracle(std::uint32_t m, std::uint32_t k, unsigned workers, double budget,
               bool sequences, const std::string& out_dir) {
    const auto params = rholab::Params::create(m, k);
    ordered_json doc;
    doc["tool_version"] = rholab::io::tool_version();
    doc["config"] = ordered_json{{"m", m}, {"k", k}};

    auto law_json = [](const rholab::oracle::JointLaw& law) {
        ordered_json j;
        j["total_outcomes"] = law.total_outcomes;
        ordered_json joint = ordered_json::array();
        for (const auto& [key, count] : law.joint_counts)
            joint.push_back(ordered_json::array({key.first, key.second, count}));
        j["joint_counts"] = joint;
        ordered_json tau = ordered_json::array();
        for (const auto& [t, count] : law.tau_counts)
            tau.push_back(ordered_json::array({t, count}));
        j["tau_counts"] = tau;
        ordered_json period = ordered_json::array();
        for (const auto& [p, count] : law.period_counts)
            period.push_back(ordered_json::array({p, count}));
        j["period_counts"] = period;
        j["e_tau"] = law.e_tau();
        j["p_period1"] = law.p_period1();
        return j;
    };

    std::string file;
    if (sequences) {
        const auto law = rholab::oracle::enumerate_sequences_exact(params, workers);
        doc["space"] = "sequences";
        doc["law"] = law_json(law);
        file = "oracle_sequences.json";
    } else {
        const auto exact = rholab::oracle::enumerate_maps_exact(params, workers);
        doc["space"] = "maps";
        doc["law"] = law_json(exact.law);
        doc["n_maps"] = exact.n_maps;
        doc["e_num_cycles"] = exact.e_num_cycles();
        doc["p_no_seed_period1"] = exact.p_no_seed_period1();
        doc["e_tau_star"] = exact.e_tau_star();
        file = "oracle_maps.json";
    }
    const std::string text = doc.dump(2) + "\n";
    rholab::io::write_text_file(std::filesystem::path(out_dir) / file, text);
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rho-lab: cycle and tail structure of iterated random k-ary maps"};
    app.require_subcommand(1);

    BatchArgs sim_args;
    auto* simulate = app.add_subcommand(
        "simulate", "sample first-repeat trials (mu, tau, period) from random sequences");
    add_batch_options(simulate, sim_args);

    BatchArgs haz_args;
    auto* hazard = app.add_subcommand(
        "hazard", "sample trials with the exact hazard decomposition (window size 2)");
    add_batch_options(hazard, haz_args);

    struct {
        std::uint32_t m = 0;
        std::uint32_t k = 2;
        unsigned workers = 0;
        double budget = 1e9;
        std::string out_dir = default_out_dir().string();
    } oracle_args, exhaustive_args;
    auto* oracle = app.add_subcommand(
        "oracle", "enumerate every map and seed exactly (small m, k only)");
    oracle->add_option("--m", oracle_args.m, "alphabet size")->required();
    oracle->add_option("--k", oracle_args.k, "window size");
    oracle->add_option("--workers", oracle_args.workers, "worker threads");
    oracle->add_option("--budget", oracle_args.budget, "work budget");
    oracle->add_option("--out", oracle_args.out_dir, "output directory");
    auto* exhaustive = app.add_subcommand(
        "exhaustive", "enumerate every symbol sequence exactly (small m, k only)");
    exhaustive->add_option("--m", exhaustive_args.m, "alphabet size")->required();
    exhaustive->add_option("--k", exhaustive_args.k, "window size");
    exhaustive->add_option("--workers", exhaustive_args.workers, "worker threads");
    exhaustive->add_option("--budget", exhaustive_args.budget, "sequence budget");
    exhaustive->add_option("--out", exhaustive_args.out_dir, "output directory");

    struct {
        std::uint32_t m = 0;
        std::uint32_t k = 2;
        double x = 1.0;
        std::uint64_t trials = 10000;
        std::uint64_t seed = rholab::acceptance::kDefaultMasterSeed;
        unsigned workers = 0;
        std::string out_dir = default_out_dir().string();
    } poisson_args;
    auto* poisson = app.add_subcommand(
        "poisson", "empirical collision-count law vs its Poisson approximation");
    poisson->add_option("--m", poisson_args.m, "alphabet size")->required();
    poisson->add_option("--k", poisson_args.k, "window size");
    poisson->add_option("--x", poisson_args.x, "window-count scale");
    poisson->add_option("--trials", poisson_args.trials, "number of trials");
    poisson->add_option("--seed", poisson_args.seed, "master seed");
    poisson->add_option("--workers", poisson_args.workers, "worker threads");
    poisson->add_option("--out", poisson_args.out_dir, "output directory");

    struct {
        std::uint32_t m = 0;
        std::uint32_t k = 2;
        double x = 1.0;
    } theory_args;
    auto* theory = app.add_subcommand(
        "theory", "print collision-count approximation parameters");
    theory->add_option("--m", theory_args.m, "alphabet size")->required();
    theory->add_option("--k", theory_args.k, "window size");
    theory->add_option("--x", theory_args.x, "window-count scale");

    rholab::acceptance::SuiteOptions report_opts;
    report_opts.out_dir = default_out_dir();
    std::vector<std::string> threshold_kv;
    auto* report = app.add_subcommand("report", "run the acceptance criteria suite");
    report->add_option("--seed", report_opts.master_seed, "master seed");
    report->add_option("--workers", report_opts.workers, "worker threads");
    std::string report_out = report_opts.out_dir.string();
    report->add_option("--out", report_out, "artifact directory");
    report->add_option("--only", report_opts.only, "criterion ids to run (repeatable)");
    report->add_option("--threshold", threshold_kv,
                       "threshold override KEY=VALUE (repeatable)");
    report->add_flag("--reuse", report_opts.reuse,
                     "evaluate existing artifacts without recomputing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return run_batch(sim_args, false, "simulate");
        if (hazard->parsed()) return run_batch(haz_args, true, "hazard");
        if (oracle->parsed())
            return run_oracle(oracle_args.m, oracle_args.k, oracle_args.workers,
                              oracle_args.budget, false, oracle_args.out_dir);
        if (exhaustive->parsed())
            return run_oracle(exhaustive_args.m, exhaustive_args.k,
                              exhaustive_args.workers, exhaustive_args.budget, true,
                              exhaustive_args.out_dir);
        if (poisson->parsed()) {
            const auto params = rholab::Params::create(poisson_args.m, poisson_args.k);
            const auto gap = rholab::poisson_experiment::poisson_gap(
                params, poisson_args.x, poisson_args.trials, poisson_args.seed,
                poisson_args.workers);
            ordered_json doc;
            doc["tool_version"] = rholab::io::tool_version();
            doc["config"] = ordered_json{{"m", poisson_args.m},
                                         {"k", poisson_args.k},
                                         {"x", poisson_args.x},
                                         {"trials", poisson_args.trials},
                                         {"master_seed", poisson_args.seed}};
            doc["n_windows"] = gap.n_windows;
            doc["lambda"] = gap.lambda;
            doc["bound_b1_b2"] = gap.bound_b1_b2;
            doc["p0_hat"] = gap.p0_hat;
            doc["p0_gap"] = gap.p0_gap;
            doc["tv_empirical"] = gap.tv_empirical;
            doc["tv_error_bar"] = gap.tv_error_bar;
            ordered_json pmf = ordered_json::array();
            for (const auto& [z, p] : gap.z_pmf)
                pmf.push_back(ordered_json::array({z, p}));
            doc["z_pmf"] = pmf;
            const std::string text = doc.dump(2) + "\n";
            rholab::io::write_text_file(
                std::filesystem::path(poisson_args.out_dir) / "poisson_gap.json", text);
            std::cout << text;
            return 0;
        }
        if (theory->parsed()) {
            const auto params = rholab::Params::create(theory_args.m, theory_args.k);
            const auto b = rholab::theory::chen_stein_bounds(params, theory_args.x);
            std::cout << "N=" << b.n_windows << '\n'
                      << "lambda=" << b.lambda << '\n'
                      << "b1=" << b.b1 << '\n'
                      << "b2=" << b.b2 << '\n';
            return 0;
        }
        if (report->parsed()) {
            report_opts.out_dir = report_out;
            for (const auto& kv : threshold_kv) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) {
                    std::cerr << "rho-lab: --threshold expects KEY=VALUE, got " << kv
                              << '\n';
                    return 2;
                }
                report_opts.overrides[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
            const auto suite = rholab::acceptance::run_suite(report_opts, std::cout);
            return suite.all_pass ? 0 : 1;
        }
    } catch (const rholab::acceptance::MissingArtifactError& e) {
        std::cerr << "rho-lab: " << e.what() << '\n';
        return 2;
    } catch (const rholab::CapacityError& e) {
        std::cerr << "rho-lab: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "rho-lab: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
