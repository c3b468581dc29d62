#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace opseq {

const std::vector<std::string> kExperimentNames = {
    "lemma-fuzz",         "sandwich", "shift-demo",
    "dominated-product",  "classify", "interval-counterexample",
};

bool is_experiment_name(const std::string& name) {
    return std::find(kExperimentNames.begin(), kExperimentNames.end(), name) !=
           kExperimentNames.end();
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_ll(const std::string& s, long long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtoll(s.c_str(), &end, 10);
    return errno == 0 && end == s.c_str() + s.size();
}

bool parse_ull(const std::string& s, unsigned long long& out) {
    if (s.empty() || s[0] == '-') return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtoull(s.c_str(), &end, 10);
    return errno == 0 && end == s.c_str() + s.size();
}

bool parse_dbl(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(s.c_str(), &end);
    return errno == 0 && end == s.c_str() + s.size() && std::isfinite(out);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

}  // namespace

DecaySchedule parse_rate(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    const std::string kind = parts[0];
    if (kind == "harmonic") {
        double k = 0.0;
        if (parts.size() != 2 || !parse_dbl(parts[1], k))
            throw Error("rate: expected harmonic:K with numeric K");
        return DecaySchedule::harmonic(k);
    }
    if (kind == "geometric") {
        double k = 0.0, r = 0.0;
        if (parts.size() != 3 || !parse_dbl(parts[1], k) || !parse_dbl(parts[2], r))
            throw Error("rate: expected geometric:K:r with numeric K, r");
        return DecaySchedule::geometric(k, r);
    }
    if (kind == "table") {
        if (parts.size() != 2) throw Error("rate: expected table:v1,v2,...");
        std::vector<double> vals;
        for (const std::string& tok : split(parts[1], ',')) {
            double v = 0.0;
            if (!parse_dbl(trim(tok), v)) throw Error("rate: bad table entry '" + tok + "'");
            vals.push_back(v);
        }
        return DecaySchedule::from_table(std::move(vals));
    }
    throw Error("rate: unknown kind '" + kind + "' (harmonic, geometric, table)");
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::vector<std::string> issues;
    std::set<std::string> seen;

    int lineno = 0;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) {
            issues.push_back("line " + std::to_string(lineno) + ": empty key");
            continue;
        }
        if (!seen.insert(key).second) {
            issues.push_back("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
            continue;
        }

        if (key == "experiment") {
            if (!is_experiment_name(val))
                issues.push_back("experiment: unknown name '" + val + "'");
            else
                cfg.experiment = val;
        } else if (key == "dim") {
            long long v = 0;
            if (!parse_ll(val, v) || v < 1 || v > 64)
                issues.push_back("dim: expected an integer in [1, 64], got '" + val + "'");
            else
                cfg.dim = static_cast<int>(v);
        } else if (key == "n_max") {
            long long v = 0;
            if (!parse_ll(val, v) || v < 1 || v > 100000)
                issues.push_back("n_max: expected an integer in [1, 100000], got '" + val + "'");
            else
                cfg.n_max = static_cast<int>(v);
        } else if (key == "seed") {
            unsigned long long v = 0;
            if (!parse_ull(val, v))
                issues.push_back("seed: expected a nonnegative integer, got '" + val + "'");
            else
                cfg.seed = static_cast<std::uint64_t>(v);
        } else if (key == "tol") {
            double v = 0.0;
            if (!parse_dbl(val, v) || !(v > 0.0))
                issues.push_back("tol: expected a positive number, got '" + val + "'");
            else
                cfg.tol = v;
        } else if (key == "k") {
            long long v = 0;
            if (!parse_ll(val, v) || v < 1)
                issues.push_back("k: expected an integer >= 1, got '" + val + "'");
            else
                cfg.k = static_cast<int>(v);
        } else if (key == "rate") {
            try {
                parse_rate(val);
                cfg.rate = val;
            } catch (const Error& e) {
                issues.push_back(e.what());
            }
        } else {
            issues.push_back("unknown key '" + key + "'");
        }
    }

    if (cfg.k > cfg.n_max)
        issues.push_back("k: must not exceed n_max (k=" + std::to_string(cfg.k) +
                         ", n_max=" + std::to_string(cfg.n_max) + ")");
    if (!issues.empty()) throw ParseError(issues);
    return cfg;
}

// ---- shared report plumbing -----------------------------------------------------

namespace {

void base_header(ReportBundle& b, const ExperimentConfig& cfg) {
    b.header.emplace_back("experiment", cfg.experiment);
    b.header.emplace_back("dim", std::to_string(cfg.dim));
    b.header.emplace_back("n_max", std::to_string(cfg.n_max));
    b.header.emplace_back("seed", std::to_string(cfg.seed));
    b.header.emplace_back("tol", fmt_double(cfg.tol));
    b.header.emplace_back("k", std::to_string(cfg.k));
    b.header.emplace_back("rate", cfg.rate);
    b.header.emplace_back("prng", kPrngIdentity);
}

void verdict_summary(ReportBundle& b, const std::string& prefix,
                     const std::array<Verdict, 3>& v) {
    b.summary.emplace_back(prefix + "_norm_verdict", verdict_name(v[0]));
    b.summary.emplace_back(prefix + "_strong_verdict", verdict_name(v[1]));
    b.summary.emplace_back(prefix + "_weak_verdict", verdict_name(v[2]));
}

// ---- lemma-fuzz -------------------------------------------------------------------

ReportBundle run_lemma_fuzz(const ExperimentConfig& cfg) {
    ReportBundle b;
    base_header(b, cfg);
    b.header.emplace_back("columns_note",
                          "norm_residual = root gap, strong_residual_max = root of norm gap, "
                          "weak_residual_max = margin, flag = bound violated");
    int violations = 0;
    double max_ratio = 0.0;
    for (int i = 1; i <= cfg.n_max; ++i) {
        const int dim = 1 + (i - 1) % 16;
        Rng r(derive_seed(cfg.seed, 32, static_cast<std::uint64_t>(i)));
        const HermitianMatrix p =
            rand_psd(dim, derive_seed(cfg.seed, 30, static_cast<std::uint64_t>(i)),
                     0.25 + 4.0 * r.uniform());
        HermitianMatrix q;
        if (i % 4 == 0) {
            // Near-coincident pair: probes the bound where the gap is tiny.
            const double t = std::pow(10.0, -6.0 * r.uniform());
            q = p + rand_psd(dim, derive_seed(cfg.seed, 31, static_cast<std::uint64_t>(i)), t);
        } else {
            q = rand_psd(dim, derive_seed(cfg.seed, 31, static_cast<std::uint64_t>(i)),
                         0.25 + 4.0 * r.uniform());
        }
        const GapBound g = sqrt_contraction_gap(p, q);
        const bool bad = g.lhs > g.rhs + 1e-10 * std::max(1.0, g.rhs);
        if (bad) ++violations;
        if (g.rhs > 0.0) max_ratio = std::max(max_ratio, g.lhs / g.rhs);
        b.rows.push_back({i, g.lhs, g.rhs, g.rhs - g.lhs, bad ? 1 : 0});
    }
    b.summary.emplace_back("trials", std::to_string(cfg.n_max));
    b.summary.emplace_back("dims_cycled", "1..16");
    b.summary.emplace_back("violations", std::to_string(violations));
    b.summary.emplace_back("max_lhs_over_rhs", fmt_double(max_ratio));
    b.summary.emplace_back("asserted", "root gap never exceeds root of norm gap");
    b.passed = violations == 0;
    return b;
}

// ---- sandwich ----------------------------------------------------------------------

ReportBundle run_sandwich(const ExperimentConfig& cfg) {
    ReportBundle b;
    base_header(b, cfg);
    const DecaySchedule schedule = parse_rate(cfg.rate);
    const HermitianMatrix limit = rand_hermitian(cfg.dim, derive_seed(cfg.seed, 33, 0), 1.0);
    const SandwichInstance inst =
        make_sandwich_instance(limit, schedule, cfg.n_max, derive_seed(cfg.seed, 34, 0));
    const MatrixTestSet tests = default_matrix_tests(cfg.dim, derive_seed(cfg.seed, 35, 0));
    const SandwichReport rep = sandwich_verify(inst, tests, cfg.tol, cfg.k);

    for (int n = 1; n <= cfg.n_max; ++n) {
        const size_t i = static_cast<size_t>(n - 1);
        const bool premise_bad = !rep.premises[i].lower_ok || !rep.premises[i].upper_ok;
        b.rows.push_back({n, rep.middle_res[0].values[i], rep.middle_res[1].values[i],
                          rep.middle_res[2].values[i], premise_bad ? 1 : 0});
    }
    b.summary.emplace_back("premises_checked", std::to_string(rep.premises.size()));
    verdict_summary(b, "lower", rep.lower_verdict);
    verdict_summary(b, "middle", rep.middle_verdict);
    verdict_summary(b, "upper", rep.upper_verdict);
    b.summary.emplace_back("norm_bound_checked", fmt_bool(rep.bound_checked));
    b.summary.emplace_back("norm_bound_violations", std::to_string(rep.bound_violations.size()));
    for (const std::string& f : rep.failures) b.summary.emplace_back("failure", f);
    b.summary.emplace_back(
        "asserted", "order premises at every n; squeeze transfer per mode; norm bound per n");
    b.passed = rep.passed;
    return b;
}

// ---- shift-demo ---------------------------------------------------------------------

BandOperator shift_plus_adjoint(int n) {
    const BandOperator s = shift_power(n);
    return band_linear_comb({{cplx(1.0, 0.0), s}, {cplx(1.0, 0.0), band_adjoint(s)}});
}

ReportBundle run_shift_demo(const ExperimentConfig& cfg) {
    ReportBundle b;
    base_header(b, cfg);
    const BandSequence seq{cfg.n_max, [](int n) { return shift_plus_adjoint(n); }};
    const BandTestSet tests = default_band_tests(derive_seed(cfg.seed, 36, 0));
    const auto res = residuals(seq, BandOperator::zero(), tests);
    std::array<Verdict, 3> verdicts{};
    for (int m = 0; m < 3; ++m)
        verdicts[static_cast<size_t>(m)] = classify(res[static_cast<size_t>(m)], cfg.tol, cfg.k);

    for (int n = 1; n <= cfg.n_max; ++n) {
        const size_t i = static_cast<size_t>(n - 1);
        b.rows.push_back({n, res[0].values[i], res[1].values[i], res[2].values[i],
                          res[0].window_unstable[i] ? 1 : 0});
    }

    // Exact structural identities of the shift.
    bool isometry_exact = true;
    const BandOperator eye = BandOperator::identity();
    for (int n = 1; n <= cfg.n_max && isometry_exact; ++n) {
        const BandOperator s = shift_power(n);
        isometry_exact = band_equals(band_compose(band_adjoint(s), s), eye);
    }
    BandOperator eye_minus_p0;
    eye_minus_p0.set_diagonal(0, EvSeq({cplx(0.0, 0.0)}, cplx(1.0, 0.0)));
    const bool range_projection_exact =
        band_equals(band_compose(shift_power(1), band_adjoint(shift_power(1))), eye_minus_p0);

    const FinSuppVector e0 = FinSuppVector::unit(0);
    double e0_norm_dev = 0.0, second_moment_dev = 0.0;
    double probe_min = 0.0, probe_max = 0.0, drift_max = 0.0;
    bool window_stable_all = true;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const BandOperator a = shift_plus_adjoint(n);
        e0_norm_dev = std::max(e0_norm_dev, std::abs(band_apply(a, e0).norm() - 1.0));
        second_moment_dev = std::max(
            second_moment_dev, std::abs(pairing(band_compose(a, a), e0, e0) - cplx(1.0, 0.0)));
        const SectionProbe p = section_modulus_probe(a, 4 * n, e0);
        probe_min = n == 1 ? p.value : std::min(probe_min, p.value);
        probe_max = n == 1 ? p.value : std::max(probe_max, p.value);
        drift_max = std::max(drift_max, std::abs(p.value - p.doubled_value));
        window_stable_all = window_stable_all && p.stable;
    }

    b.summary.emplace_back("isometry_exact", fmt_bool(isometry_exact));
    b.summary.emplace_back("range_projection_complement_exact", fmt_bool(range_projection_exact));
    b.summary.emplace_back("e0_image_norm_max_dev", fmt_double(e0_norm_dev));
    b.summary.emplace_back("second_moment_e0_max_dev", fmt_double(second_moment_dev));
    verdict_summary(b, "residual", verdicts);
    b.summary.emplace_back("modulus_probe_min", fmt_double(probe_min));
    b.summary.emplace_back("modulus_probe_max", fmt_double(probe_max));
    b.summary.emplace_back("modulus_probe_doubled_drift_max", fmt_double(drift_max));
    b.summary.emplace_back("modulus_probe_window_stable_all", fmt_bool(window_stable_all));
    b.summary.emplace_back("asserted",
                           "exact shift identities; weakly null; not strongly null");

    const bool weak_null = verdicts[2] == Verdict::Convergent;
    const bool strong_not_null = verdicts[1] != Verdict::Convergent;
    b.passed = isometry_exact && range_projection_exact && e0_norm_dev <= 1e-12 &&
               second_moment_dev <= 1e-12 && weak_null && strong_not_null;
    return b;
}

// ---- dominated-product ---------------------------------------------------------------

ReportBundle run_dominated_product(const ExperimentConfig& cfg) {
    ReportBundle b;
    base_header(b, cfg);
    const DecaySchedule schedule = parse_rate(cfg.rate);
    const int dim = cfg.dim;
    const DenseMatrix u = seeded_unitary(dim, derive_seed(cfg.seed, 40, 0));
    const DenseMatrix uh = u.adjoint();

    Rng fixed(derive_seed(cfg.seed, 43, 0));
    std::vector<double> bdiag(static_cast<size_t>(dim)), mdiag(static_cast<size_t>(dim));
    for (double& x : bdiag) x = 0.2 + 0.8 * fixed.uniform();
    for (double& x : mdiag) x = 1.1 + 0.4 * fixed.uniform();

    auto conjugated_diagonal = [&](const std::vector<double>& d) {
        DenseMatrix dm(dim, dim);
        for (int i = 0; i < dim; ++i) dm.at(i, i) = cplx(d[static_cast<size_t>(i)], 0.0);
        return HermitianMatrix::hermitian_part(u * dm * uh);
    };

    auto a_cache = std::make_shared<std::vector<HermitianMatrix>>();
    auto b_cache = std::make_shared<std::vector<HermitianMatrix>>();
    for (int n = 1; n <= cfg.n_max; ++n) {
        Rng rn(derive_seed(cfg.seed, 42, static_cast<std::uint64_t>(n)));
        std::vector<double> adiag(static_cast<size_t>(dim));
        for (double& x : adiag) x = rn.uniform(-1.0, 1.0);
        std::vector<double> bscaled(static_cast<size_t>(dim));
        const double t = schedule.rate(n);
        for (int i = 0; i < dim; ++i) bscaled[static_cast<size_t>(i)] = t * bdiag[static_cast<size_t>(i)];
        a_cache->push_back(conjugated_diagonal(adiag));
        b_cache->push_back(conjugated_diagonal(bscaled));
    }
    const HermitianMatrix dominator = conjugated_diagonal(mdiag);

    const MatrixSequence a_seq{cfg.n_max, dim,
                               [a_cache](int n) { return (*a_cache)[static_cast<size_t>(n - 1)]; }};
    const MatrixSequence b_seq{cfg.n_max, dim,
                               [b_cache](int n) { return (*b_cache)[static_cast<size_t>(n - 1)]; }};
    const MatrixTestSet tests = default_matrix_tests(dim, derive_seed(cfg.seed, 41, 0));
    const DominatedProductReport rep =
        dominated_product_check(a_seq, b_seq, dominator, tests, cfg.tol, cfg.k);

    std::vector<int> flags(static_cast<size_t>(cfg.n_max), 0);
    for (const PremiseViolation& v : rep.violations)
        if (v.n >= 1 && v.n <= cfg.n_max) flags[static_cast<size_t>(v.n - 1)] = 1;
    for (int n = 1; n <= cfg.n_max; ++n) {
        const size_t i = static_cast<size_t>(n - 1);
        b.rows.push_back({n, rep.product_res[0].values[i], rep.product_res[1].values[i],
                          rep.product_res[2].values[i], flags[i]});
    }

    b.summary.emplace_back("scalar_dominator", fmt_bool(rep.scalar_dominator));
    b.summary.emplace_back("premise_violations", std::to_string(rep.violations.size()));
    verdict_summary(b, "product", rep.product_verdict);
    verdict_summary(b, "b", rep.b_verdict);
    for (const std::string& f : rep.failures) b.summary.emplace_back("failure", f);
    b.summary.emplace_back("asserted",
                           "PSD, domination, commutation and envelope premises at every n; "
                           "product inherits every convergent mode of B");
    b.passed = rep.passed;
    return b;
}

// ---- classify -------------------------------------------------------------------------

ReportBundle run_classify(const ExperimentConfig& cfg) {
    ReportBundle b;
    base_header(b, cfg);
    const DecaySchedule schedule = parse_rate(cfg.rate);
    const HermitianMatrix limit = rand_hermitian(cfg.dim, derive_seed(cfg.seed, 37, 0), 1.0);
    const HermitianMatrix direction = rand_hermitian(cfg.dim, derive_seed(cfg.seed, 38, 0), 1.0);
    const MatrixSequence seq{cfg.n_max, cfg.dim, [&](int n) {
                                 return limit + direction.scaled(schedule.rate(n));
                             }};
    const MatrixTestSet tests = default_matrix_tests(cfg.dim, derive_seed(cfg.seed, 39, 0));
    const auto res = residuals(seq, limit, tests);
    std::array<Verdict, 3> verdicts{};
    for (int m = 0; m < 3; ++m)
        verdicts[static_cast<size_t>(m)] = classify(res[static_cast<size_t>(m)], cfg.tol, cfg.k);

    for (int n = 1; n <= cfg.n_max; ++n) {
        const size_t i = static_cast<size_t>(n - 1);
        b.rows.push_back({n, res[0].values[i], res[1].values[i], res[2].values[i], 0});
    }
    verdict_summary(b, "residual", verdicts);
    b.summary.emplace_back("final_norm_residual", fmt_double(res[0].values.back()));
    b.summary.emplace_back("asserted", "norm verdict is convergent at the configured tol");
    if (verdicts[0] != Verdict::Convergent)
        b.summary.emplace_back("failure", std::string("norm verdict is ") +
                                              verdict_name(verdicts[0]) + ", expected convergent");
    b.passed = verdicts[0] == Verdict::Convergent;
    return b;
}

// ---- interval-counterexample ------------------------------------------------------------

ReportBundle run_interval_counterexample(const ExperimentConfig& cfg) {
    ReportBundle b;
    base_header(b, cfg);
    b.header.emplace_back("columns_note",
                          "norm_residual = min eig(B+A), strong_residual_max = min eig(B-A), "
                          "weak_residual_max = min eig(B-|A|), flag = witness verified");
    const auto witness =
        search_interval_counterexample(cfg.dim, derive_seed(cfg.seed, 45, 0), 64);
    if (witness) {
        b.rows.push_back({witness->trials_used, witness->premise_lower_min,
                          witness->premise_upper_min, witness->violation_min, 1});
        b.summary.emplace_back("found", "true");
        b.summary.emplace_back("trials", std::to_string(witness->trials_used));
        b.summary.emplace_back("violation_min_eig", fmt_double(witness->violation_min));
    } else {
        b.summary.emplace_back("found", "false");
    }
    if (cfg.dim >= 2) {
        b.summary.emplace_back(
            "asserted", "a verified witness exists: -B <= A <= B yet B - |A| has a negative eigenvalue");
        b.passed = witness.has_value();
    } else {
        b.summary.emplace_back("asserted",
                               "no witness exists in dimension one (|a| <= b is forced)");
        b.passed = !witness.has_value();
    }
    return b;
}

}  // namespace

ReportBundle run_experiment(const ExperimentConfig& cfg) {
    if (!is_experiment_name(cfg.experiment))
        throw ParseError({"experiment: unknown or missing name '" + cfg.experiment + "'"});
    if (cfg.k > cfg.n_max) throw ParseError({"k: must not exceed n_max"});
    if (cfg.experiment == "lemma-fuzz") return run_lemma_fuzz(cfg);
    if (cfg.experiment == "sandwich") return run_sandwich(cfg);
    if (cfg.experiment == "shift-demo") return run_shift_demo(cfg);
    if (cfg.experiment == "dominated-product") return run_dominated_product(cfg);
    if (cfg.experiment == "classify") return run_classify(cfg);
    return run_interval_counterexample(cfg);
}

std::string emit_csv(const ReportBundle& bundle) {
    std::string out;
    for (const auto& [key, value] : bundle.header) out += "# " + key + ": " + value + "\n";
    out += "n,norm_residual,strong_residual_max,weak_residual_max,flag\n";
    for (const ReportRow& r : bundle.rows) {
        out += std::to_string(r.n) + "," + fmt_double(r.norm_residual) + "," +
               fmt_double(r.strong_residual_max) + "," + fmt_double(r.weak_residual_max) + "," +
               std::to_string(r.flag) + "\n";
    }
    for (const auto& [key, value] : bundle.summary) out += "# " + key + ": " + value + "\n";
    out += std::string("# passed: ") + (bundle.passed ? "true" : "false") + "\n";
    return out;
}

}  // namespace opseq
