// Command-line front end. Talks to the library exclusively through the C
// API in opseq.h; exit code 0 means every asserted property held, 1 means
// the experiment ran but an assertion failed, 2 means bad usage or config.
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "opseq.h"

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    long long n_max = 0;
    long long dim = 0;
    long long k = 0;
    double tol = 0.0;
    std::string rate;
};

int usage_error(const std::string& msg) {
    std::cerr << "error: " << msg << "\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"operator-sequence verification experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config_path, "configuration file (key = value lines)");
    app.add_option("--out", opt.out_path, "write the CSV report here instead of stdout");
    auto* seed_opt = app.add_option("--seed", opt.seed, "override the seed");
    auto* nmax_opt = app.add_option("--n-max", opt.n_max, "override the horizon");
    auto* dim_opt = app.add_option("--dim", opt.dim, "override the matrix dimension");
    auto* k_opt = app.add_option("--k", opt.k, "override the verdict window");
    auto* tol_opt = app.add_option("--tol", opt.tol, "override the verdict tolerance");
    auto* rate_opt = app.add_option("--rate", opt.rate,
                                    "override the decay schedule (harmonic:K, "
                                    "geometric:K:r, table:v1,v2,...)");

    static const char* kNames[] = {"lemma-fuzz",        "sandwich", "shift-demo",
                                   "dominated-product", "classify", "interval-counterexample"};
    static const char* kDescs[] = {
        "fuzz the square-root gap bound on random PSD pairs",
        "verify order premises and squeeze transfer on a seeded instance",
        "shift-power demonstration: weakly null, never strongly null",
        "products dominated in modulus inherit convergence to zero",
        "classify residual trajectories of a seeded contracting sequence",
        "search for -B <= A <= B with B - |A| not PSD",
    };
    for (int i = 0; i < 6; ++i) app.add_subcommand(kNames[i], kDescs[i]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string config_text;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path, std::ios::binary);
        if (!in) return usage_error("cannot read config file '" + opt.config_path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        config_text = ss.str();
    }

    opseq_config* cfg = nullptr;
    if (opseq_config_parse(config_text.c_str(), &cfg) != OPSEQ_OK)
        return usage_error(opseq_last_error());

    const std::string experiment = app.get_subcommands().front()->get_name();
    opseq_status s = opseq_config_set_experiment(cfg, experiment.c_str());
    if (s == OPSEQ_OK && seed_opt->count() > 0) s = opseq_config_set_seed(cfg, opt.seed);
    if (s == OPSEQ_OK && nmax_opt->count() > 0) s = opseq_config_set_int(cfg, "n_max", opt.n_max);
    if (s == OPSEQ_OK && dim_opt->count() > 0) s = opseq_config_set_int(cfg, "dim", opt.dim);
    if (s == OPSEQ_OK && k_opt->count() > 0) s = opseq_config_set_int(cfg, "k", opt.k);
    if (s == OPSEQ_OK && tol_opt->count() > 0) s = opseq_config_set_tol(cfg, opt.tol);
    if (s == OPSEQ_OK && rate_opt->count() > 0) s = opseq_config_set_rate(cfg, opt.rate.c_str());
    if (s != OPSEQ_OK) {
        const std::string msg = opseq_last_error();
        opseq_config_free(cfg);
        return usage_error(msg);
    }

    opseq_report* report = nullptr;
    s = opseq_run(cfg, &report);
    opseq_config_free(cfg);
    if (s != OPSEQ_OK) return usage_error(opseq_last_error());

    const char* csv = nullptr;
    opseq_report_csv(report, &csv);
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) {
            opseq_report_free(report);
            return usage_error("cannot write report to '" + opt.out_path + "'");
        }
        out << csv;
    } else {
        std::cout << csv;
    }

    int passed = 0;
    opseq_report_passed(report, &passed);
    opseq_report_free(report);
    return passed ? 0 : 1;
}
