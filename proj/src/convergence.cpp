#include "convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace opseq {

const char* mode_name(Mode m) {
    switch (m) {
        case Mode::Norm: return "norm";
        case Mode::Strong: return "strong";
        case Mode::Weak: return "weak";
    }
    return "?";
}

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Convergent: return "convergent";
        case Verdict::Stalled: return "stalled";
        case Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

constexpr double kWindowDriftTol = 1e-3;

HermitianMatrix fetch(const MatrixSequence& seq, int n) {
    HermitianMatrix a = seq.element(n);
    if (a.dim() != seq.dim)
        throw DimensionError("sequence element at n=" + std::to_string(n) +
                             " has dimension " + std::to_string(a.dim()) + ", expected " +
                             std::to_string(seq.dim));
    return a;
}

// ---- finite-section component machinery ------------------------------------

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
};

// Nodes of the N x N section grouped into connected components of the
// nonzero pattern. Components are invariant subspaces of the section, so
// spectral quantities decompose exactly across them.
std::vector<std::vector<int>> section_components(const BandOperator& a, int n) {
    UnionFind uf(n);
    for (const auto& [k, d] : a.diagonals()) {
        long i = std::max(k, 0);
        long j = std::max(-k, 0);
        for (long t = 0; i < n && j < n; ++t, ++i, ++j)
            if (d.at(t) != cplx(0.0, 0.0)) uf.unite(static_cast<int>(i), static_cast<int>(j));
    }
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of(n, -1);
    for (int v = 0; v < n; ++v) {
        const int root = uf.find(v);
        if (group_of[root] < 0) {
            group_of[root] = static_cast<int>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<size_t>(group_of[root])].push_back(v);  // ascending by construction
    }
    return groups;
}

DenseMatrix section_block(const BandOperator& a, const std::vector<int>& nodes) {
    const int sz = static_cast<int>(nodes.size());
    DenseMatrix b(sz, sz);
    for (int r = 0; r < sz; ++r)
        for (int c = 0; c < sz; ++c) b.at(r, c) = a.entry(nodes[r], nodes[c]);
    return b;
}

}  // namespace

double band_section_norm(const BandOperator& a, int n) {
    if (n < 0) throw DimensionError("section size must be nonnegative");
    if (n == 0) return 0.0;
    double best = 0.0;
    for (const auto& nodes : section_components(a, n)) {
        if (nodes.size() == 1) {
            best = std::max(best, std::abs(a.entry(nodes[0], nodes[0])));
            continue;
        }
        best = std::max(best, op_norm(section_block(a, nodes)));
    }
    return best;
}

cplx section_abs_pairing(const BandOperator& a, int n, const FinSuppVector& x,
                         const FinSuppVector& y) {
    if (!is_selfadjoint(a))
        throw DimensionError("section_abs_pairing expects a self-adjoint band operator");
    if (n < 0) throw DimensionError("section size must be nonnegative");
    cplx total(0.0, 0.0);
    if (n == 0) return total;
    for (const auto& nodes : section_components(a, n)) {
        bool touches = false;
        for (int v : nodes) {
            if (x.at(v) != cplx(0.0, 0.0) || y.at(v) != cplx(0.0, 0.0)) {
                touches = true;
                break;
            }
        }
        if (!touches) continue;

        const int sz = static_cast<int>(nodes.size());
        const HermitianMatrix h = HermitianMatrix::hermitian_part(section_block(a, nodes));
        const SpectralDecomposition s = eigh(h);
        Vec xs(sz), ys(sz);
        for (int r = 0; r < sz; ++r) {
            xs[static_cast<size_t>(r)] = x.at(nodes[r]);
            ys[static_cast<size_t>(r)] = y.at(nodes[r]);
        }
        // |H| x = Q |diag| Q* x
        Vec w(sz, cplx(0.0, 0.0));
        for (int i = 0; i < sz; ++i) {
            cplx acc(0.0, 0.0);
            for (int r = 0; r < sz; ++r) acc += std::conj(s.eigenvectors.at(r, i)) * xs[r];
            w[static_cast<size_t>(i)] = acc * std::abs(s.eigenvalues[static_cast<size_t>(i)]);
        }
        Vec z(sz, cplx(0.0, 0.0));
        for (int r = 0; r < sz; ++r) {
            cplx acc(0.0, 0.0);
            for (int i = 0; i < sz; ++i) acc += s.eigenvectors.at(r, i) * w[static_cast<size_t>(i)];
            z[static_cast<size_t>(r)] = acc;
        }
        total += inner(z, ys);
    }
    return total;
}

SectionProbe section_modulus_probe(const BandOperator& a, int window, const FinSuppVector& x) {
    if (!is_selfadjoint(a))
        throw DimensionError("section_modulus_probe expects a self-adjoint band operator");
    const int min_window =
        std::max({4 * a.width(), static_cast<int>(x.max_support()) + 1, 1});
    if (window < min_window)
        throw DimensionError("section window too small; minimum admissible size is " +
                             std::to_string(min_window));
    SectionProbe p;
    p.value = section_abs_pairing(a, window, x, x).real();
    p.doubled_value = section_abs_pairing(a, 2 * window, x, x).real();
    p.stable = std::abs(p.value - p.doubled_value) <= kWindowDriftTol;
    return p;
}

// ---- residual trajectories --------------------------------------------------

std::array<ResidualTrajectory, 3> residuals(const MatrixSequence& seq,
                                            const HermitianMatrix& limit,
                                            const MatrixTestSet& tests) {
    if (limit.dim() != seq.dim)
        throw DimensionError("residuals: limit dimension differs from the sequence's");
    std::array<ResidualTrajectory, 3> out;
    for (int m = 0; m < 3; ++m) out[static_cast<size_t>(m)].mode = static_cast<Mode>(m);
    for (int n = 1; n <= seq.horizon; ++n) {
        const HermitianMatrix d = fetch(seq, n) - limit;
        out[0].values.push_back(op_norm(d));

        double strong = 0.0;
        for (const Vec& x : tests.vectors) strong = std::max(strong, vec_norm(d.apply(x)));
        out[1].values.push_back(strong);

        double weak = 0.0;
        for (const auto& [x, y] : tests.pairs) weak = std::max(weak, std::abs(inner(d.apply(x), y)));
        out[2].values.push_back(weak);
    }
    return out;
}

std::array<ResidualTrajectory, 3> residuals(const BandSequence& seq, const BandOperator& limit,
                                            const BandTestSet& tests) {
    std::array<ResidualTrajectory, 3> out;
    for (int m = 0; m < 3; ++m) out[static_cast<size_t>(m)].mode = static_cast<Mode>(m);
    for (int n = 1; n <= seq.horizon; ++n) {
        const BandOperator d = band_linear_comb({{cplx(1.0, 0.0), seq.element(n)},
                                                 {cplx(-1.0, 0.0), limit}});
        // Norm mode lives on finite sections; the doubled-window flag keeps
        // the approximation honest.
        const int window = std::max(4 * d.width(), 16);
        const double v = band_section_norm(d, window);
        const double v2 = band_section_norm(d, 2 * window);
        out[0].values.push_back(v);
        out[0].window_unstable.push_back(std::abs(v - v2) > kWindowDriftTol ? 1 : 0);

        double strong = 0.0;
        for (const FinSuppVector& x : tests.vectors)
            strong = std::max(strong, band_apply(d, x).norm());
        out[1].values.push_back(strong);

        double weak = 0.0;
        for (const auto& [x, y] : tests.pairs)
            weak = std::max(weak, std::abs(pairing(d, x, y)));
        out[2].values.push_back(weak);
    }
    return out;
}

Verdict classify(const ResidualTrajectory& traj, double tol, int k) {
    if (tol <= 0.0) throw DimensionError("classify: tol must be positive");
    const int len = static_cast<int>(traj.values.size());
    if (k < 1 || k > len) throw DimensionError("classify: need 1 <= k <= trajectory length");
    double lo = traj.values[static_cast<size_t>(len - k)];
    double hi = lo;
    bool all_small = true, all_large = true;
    for (int i = len - k; i < len; ++i) {
        const double v = traj.values[static_cast<size_t>(i)];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        if (v > tol) all_small = false;
        if (v < 10.0 * tol) all_large = false;
    }
    if (all_small) return Verdict::Convergent;
    if (all_large && hi <= 2.0 * lo) return Verdict::Stalled;
    return Verdict::Undetermined;
}

// ---- sandwich ---------------------------------------------------------------

std::vector<PremiseVerdict> check_sandwich_premises(const SandwichInstance& inst,
                                                    OrderTolerance tol) {
    std::vector<PremiseVerdict> out;
    for (int n = 1; n <= inst.middle.horizon; ++n) {
        const HermitianMatrix c = fetch(inst.lower, n);
        const HermitianMatrix a = fetch(inst.middle, n);
        const HermitianMatrix b = fetch(inst.upper, n);
        out.push_back({n, loewner_leq(c, a, tol), loewner_leq(a, b, tol)});
    }
    return out;
}

std::vector<PremiseVerdict> check_sandwich_premises(const BandSandwichInstance& inst,
                                                    OrderTolerance tol) {
    std::vector<PremiseVerdict> out;
    for (int n = 1; n <= inst.middle.horizon; ++n) {
        const BandOperator c = inst.lower.element(n);
        const BandOperator a = inst.middle.element(n);
        const BandOperator b = inst.upper.element(n);
        const int w = std::max({c.width(), a.width(), b.width()});
        const int window = std::max(4 * w, 16);
        const HermitianMatrix sc = finite_section_hermitian(c, window);
        const HermitianMatrix sa = finite_section_hermitian(a, window);
        const HermitianMatrix sb = finite_section_hermitian(b, window);
        out.push_back({n, loewner_leq(sc, sa, tol), loewner_leq(sa, sb, tol)});
    }
    return out;
}

namespace {

void throw_on_premise_failure(const std::vector<PremiseVerdict>& premises) {
    for (const PremiseVerdict& p : premises) {
        if (!p.lower_ok || !p.upper_ok) {
            const char* side = !p.lower_ok ? "lower <= middle" : "middle <= upper";
            throw PremiseError("sandwich premise (" + std::string(side) +
                                   ") violated at n=" + std::to_string(p.n),
                               p.n);
        }
    }
}

template <typename Report>
void assert_squeeze_transfer(Report& rep, double tol, int k) {
    for (int m = 0; m < 3; ++m) {
        const auto mi = static_cast<size_t>(m);
        rep.lower_verdict[mi] = classify(rep.lower_res[mi], tol, k);
        rep.middle_verdict[mi] = classify(rep.middle_res[mi], tol, k);
        rep.upper_verdict[mi] = classify(rep.upper_res[mi], tol, k);
        if (rep.lower_verdict[mi] == Verdict::Convergent &&
            rep.upper_verdict[mi] == Verdict::Convergent &&
            rep.middle_verdict[mi] != Verdict::Convergent) {
            rep.failures.push_back(std::string(mode_name(static_cast<Mode>(m))) +
                                   " mode: outer sequences convergent but middle verdict is " +
                                   verdict_name(rep.middle_verdict[mi]));
        }
    }
}

}  // namespace

SandwichReport sandwich_verify(const SandwichInstance& inst, const MatrixTestSet& tests,
                               double tol, int k) {
    SandwichReport rep;
    rep.tol = tol;
    rep.k = k;
    rep.premises = check_sandwich_premises(inst);
    throw_on_premise_failure(rep.premises);

    rep.lower_res = residuals(inst.lower, inst.limit, tests);
    rep.middle_res = residuals(inst.middle, inst.limit, tests);
    rep.upper_res = residuals(inst.upper, inst.limit, tests);
    assert_squeeze_transfer(rep, tol, k);

    // Quantitative transfer: the squeeze argument yields
    // ||A_n - L|| <= ||B_n - L|| + 2 ||C_n - L|| at every index.
    rep.bound_checked = true;
    for (size_t i = 0; i < rep.middle_res[0].values.size(); ++i) {
        const double mid = rep.middle_res[0].values[i];
        const double rhs = rep.upper_res[0].values[i] + 2.0 * rep.lower_res[0].values[i];
        if (mid > rhs + 1e-8 * std::max(1.0, rhs)) {
            rep.bound_violations.push_back(static_cast<int>(i) + 1);
            rep.failures.push_back("norm bound violated at n=" + std::to_string(i + 1));
        }
    }
    rep.passed = rep.failures.empty();
    return rep;
}

SandwichReport sandwich_verify(const BandSandwichInstance& inst, const BandTestSet& tests,
                               double tol, int k) {
    SandwichReport rep;
    rep.tol = tol;
    rep.k = k;
    rep.premises = check_sandwich_premises(inst);
    throw_on_premise_failure(rep.premises);

    rep.lower_res = residuals(inst.lower, inst.limit, tests);
    rep.middle_res = residuals(inst.middle, inst.limit, tests);
    rep.upper_res = residuals(inst.upper, inst.limit, tests);
    assert_squeeze_transfer(rep, tol, k);
    rep.bound_checked = false;  // norm values are section approximations here
    rep.passed = rep.failures.empty();
    return rep;
}

// ---- proof steps ------------------------------------------------------------

ProofStepReport proof_step_checks(const SandwichInstance& inst, const MatrixTestSet& tests) {
    ProofStepReport rep;
    const OrderTolerance psd_tol{};          // strict screen for the precondition
    const OrderTolerance root_tol{1e-9, 1e-10};  // clamp slack for the roots
    for (int n = 1; n <= inst.middle.horizon; ++n) {
        const HermitianMatrix c = fetch(inst.lower, n);
        if (!is_psd(c, psd_tol))
            throw NotPsdError("proof_step_checks: lower element at n=" + std::to_string(n) +
                                  " is not PSD (min eigenvalue " +
                                  std::to_string(min_eigenvalue(c)) + ")",
                              min_eigenvalue(c));
        const HermitianMatrix a = fetch(inst.middle, n);
        const HermitianMatrix b = fetch(inst.upper, n);
        const HermitianMatrix rc = sqrt_psd(c, root_tol);
        const HermitianMatrix ra = sqrt_psd(a, root_tol);
        const HermitianMatrix rb = sqrt_psd(b, root_tol);

        for (size_t xi = 0; xi < tests.vectors.size(); ++xi) {
            const Vec& x = tests.vectors[xi];
            const double qc = std::pow(vec_norm(rc.apply(x)), 2);
            const double qa = std::pow(vec_norm(ra.apply(x)), 2);
            const double qb = std::pow(vec_norm(rb.apply(x)), 2);
            const double slack = 1e-8 * std::max(1.0, qb);
            if (qc > qa + slack || qa > qb + slack)
                rep.failures.push_back("quadratic chain broken at n=" + std::to_string(n) +
                                       ", test vector " + std::to_string(xi));
        }

        const double nc = op_norm(c);
        const double na = op_norm(a);
        const double nb = op_norm(b);
        const double slack = 1e-9 * std::max(1.0, nb);
        if (nc > na + slack || na > nb + slack)
            rep.failures.push_back("norm chain broken at n=" + std::to_string(n));
        ++rep.checked_n;
    }
    rep.passed = rep.failures.empty();
    return rep;
}

SandwichInstance shifted_by_modulus(const SandwichInstance& inst) {
    SandwichInstance out;
    const auto lower = inst.lower.element;
    out.lower = {inst.lower.horizon, inst.lower.dim, [lower](int n) {
                     const HermitianMatrix c = lower(n);
                     return c + abs_op(c);
                 }};
    out.middle = {inst.middle.horizon, inst.middle.dim,
                  [mid = inst.middle.element, lower](int n) { return mid(n) + abs_op(lower(n)); }};
    out.upper = {inst.upper.horizon, inst.upper.dim,
                 [up = inst.upper.element, lower](int n) { return up(n) + abs_op(lower(n)); }};
    out.limit = inst.limit.dim() > 0 ? inst.limit + abs_op(inst.limit) : inst.limit;
    return out;
}

// ---- modulus squeeze ----------------------------------------------------------

namespace {

template <typename Report>
void assert_modulus_direction(Report& rep, double tol, int k) {
    for (int m = 0; m < 3; ++m) {
        const auto mi = static_cast<size_t>(m);
        rep.seq_verdict[mi] = classify(rep.seq_res[mi], tol, k);
        rep.abs_verdict[mi] = classify(rep.abs_res[mi], tol, k);
        const char* name = mode_name(static_cast<Mode>(m));
        if (rep.abs_verdict[mi] == Verdict::Convergent &&
            rep.seq_verdict[mi] != Verdict::Convergent)
            rep.failures.push_back(std::string(name) +
                                   " mode: modulus convergent but sequence verdict is " +
                                   verdict_name(rep.seq_verdict[mi]));
        if (rep.seq_verdict[mi] == Verdict::Convergent &&
            rep.abs_verdict[mi] != Verdict::Convergent)
            rep.notes.push_back(std::string(name) +
                                " mode: sequence convergent while modulus verdict is " +
                                verdict_name(rep.abs_verdict[mi]) +
                                " (converse direction fails; reported only)");
    }
}

}  // namespace

ModulusSqueezeReport modulus_squeeze(const MatrixSequence& seq, const MatrixTestSet& tests,
                                     double tol, int k) {
    ModulusSqueezeReport rep;
    rep.tol = tol;
    rep.k = k;
    const HermitianMatrix zero(seq.dim);
    rep.seq_res = residuals(seq, zero, tests);
    MatrixSequence abs_seq{seq.horizon, seq.dim,
                           [f = seq.element](int n) { return abs_op(f(n)); }};
    rep.abs_res = residuals(abs_seq, zero, tests);
    assert_modulus_direction(rep, tol, k);
    rep.passed = rep.failures.empty();
    return rep;
}

ModulusSqueezeReport modulus_squeeze(const BandSequence& seq, const BandTestSet& tests,
                                     double tol, int k) {
    ModulusSqueezeReport rep;
    rep.tol = tol;
    rep.k = k;
    const BandOperator zero = BandOperator::zero();
    rep.seq_res = residuals(seq, zero, tests);

    // Exact shortcut: when (A_n)* A_n = I for every n, |A_n| = I exactly and
    // the modulus trajectory needs no section approximation at all.
    bool all_identity = true;
    const BandOperator eye = BandOperator::identity();
    for (int n = 1; n <= seq.horizon && all_identity; ++n) {
        const BandOperator gram = band_compose(band_adjoint(seq.element(n)), seq.element(n));
        if (!band_equals(gram, eye)) all_identity = false;
    }

    if (all_identity) {
        rep.modulus_exact_identity = true;
        BandSequence abs_seq{seq.horizon, [](int) { return BandOperator::identity(); }};
        rep.abs_res = residuals(abs_seq, zero, tests);
    } else {
        // ||(|A|)|| = ||A|| and || |A| x || = ||A x|| hold exactly (same Gram),
        // so Norm and Strong trajectories coincide with the sequence's own.
        // Only the Weak trajectory needs the section modulus.
        rep.abs_res[0] = rep.seq_res[0];
        rep.abs_res[1] = rep.seq_res[1];
        ResidualTrajectory weak;
        weak.mode = Mode::Weak;
        for (int n = 1; n <= seq.horizon; ++n) {
            const BandOperator a = seq.element(n);
            if (!is_selfadjoint(a))
                throw DimensionError(
                    "modulus_squeeze band fallback needs self-adjoint elements for the "
                    "section modulus; element at n=" + std::to_string(n) + " is not");
            long supp = 0;
            for (const auto& [x, y] : tests.pairs)
                supp = std::max({supp, x.max_support(), y.max_support()});
            const int window = std::max({4 * a.width(), 16, static_cast<int>(supp) + 1});
            double v = 0.0, v2 = 0.0;
            for (const auto& [x, y] : tests.pairs) {
                v = std::max(v, std::abs(section_abs_pairing(a, window, x, y)));
                v2 = std::max(v2, std::abs(section_abs_pairing(a, 2 * window, x, y)));
            }
            weak.values.push_back(v);
            weak.window_unstable.push_back(std::abs(v - v2) > kWindowDriftTol ? 1 : 0);
        }
        rep.abs_res[2] = std::move(weak);
    }

    assert_modulus_direction(rep, tol, k);
    rep.passed = rep.failures.empty();
    return rep;
}

// ---- dominated products ---------------------------------------------------------

namespace {

bool exactly_scalar(const HermitianMatrix& m) {
    if (m.dim() == 0) return true;
    const cplx d0 = m.entry(0, 0);
    for (int i = 0; i < m.dim(); ++i) {
        for (int j = 0; j <= i; ++j) {
            const cplx v = m.entry(i, j);
            if (i == j ? (v != d0) : (v != cplx(0.0, 0.0))) return false;
        }
    }
    return true;
}

}  // namespace

DominatedProductReport dominated_product_check(const MatrixSequence& a_seq,
                                               const MatrixSequence& b_seq,
                                               const HermitianMatrix& dominator,
                                               const MatrixTestSet& tests, double tol, int k) {
    if (a_seq.horizon != b_seq.horizon)
        throw DimensionError("dominated_product_check: sequence horizons differ");
    if (a_seq.dim != b_seq.dim || dominator.dim() != a_seq.dim)
        throw DimensionError("dominated_product_check: dimensions differ");

    DominatedProductReport rep;
    rep.tol = tol;
    rep.k = k;
    rep.scalar_dominator = exactly_scalar(dominator);
    const double norm_m = op_norm(dominator);
    const DenseMatrix dm = dominator.to_dense();

    std::vector<HermitianMatrix> products;
    products.reserve(static_cast<size_t>(a_seq.horizon));

    for (int n = 1; n <= a_seq.horizon; ++n) {
        const HermitianMatrix a = fetch(a_seq, n);
        const HermitianMatrix b = fetch(b_seq, n);

        if (!is_psd(b)) rep.violations.push_back({n, "positivity", min_eigenvalue(b)});

        const HermitianMatrix abs_a = abs_op(a);
        if (!loewner_leq(abs_a, dominator))
            rep.violations.push_back({n, "domination", min_eigenvalue(dominator - abs_a)});

        const DenseMatrix da = a.to_dense();
        const DenseMatrix db = b.to_dense();
        const double norm_a = op_norm(a);
        const double norm_b = op_norm(b);

        const double comm_ab = op_norm(da * db - db * da);
        if (comm_ab > 1e-10 * std::max(1.0, norm_a * norm_b))
            rep.violations.push_back({n, "commutation", comm_ab});

        const double env_scale = std::max(1.0, norm_m * norm_b);
        if (!rep.scalar_dominator) {
            const double comm_bm = op_norm(db * dm - dm * db);
            if (comm_bm > 1e-10 * env_scale)
                rep.violations.push_back({n, "dominator-commutation", comm_bm});
        }

        const HermitianMatrix product = HermitianMatrix::hermitian_part(da * db);
        const HermitianMatrix envelope = HermitianMatrix::hermitian_part(dm * db);
        const OrderTolerance env_tol{1e-9 * env_scale, 0.0};
        if (!loewner_leq(product, envelope, env_tol))
            rep.violations.push_back(
                {n, "envelope-upper", min_eigenvalue(envelope - product)});
        if (!loewner_leq(envelope.scaled(-1.0), product, env_tol))
            rep.violations.push_back(
                {n, "envelope-lower", min_eigenvalue(product - envelope.scaled(-1.0))});

        products.push_back(product);
    }

    const HermitianMatrix zero(a_seq.dim);
    MatrixSequence product_seq{a_seq.horizon, a_seq.dim,
                               [cache = std::move(products)](int n) {
                                   return cache[static_cast<size_t>(n - 1)];
                               }};
    rep.product_res = residuals(product_seq, zero, tests);
    rep.b_res = residuals(b_seq, zero, tests);
    for (int m = 0; m < 3; ++m) {
        const auto mi = static_cast<size_t>(m);
        rep.product_verdict[mi] = classify(rep.product_res[mi], tol, k);
        rep.b_verdict[mi] = classify(rep.b_res[mi], tol, k);
        if (rep.b_verdict[mi] == Verdict::Convergent &&
            rep.product_verdict[mi] != Verdict::Convergent)
            rep.failures.push_back(std::string(mode_name(static_cast<Mode>(m))) +
                                   " mode: B convergent but product verdict is " +
                                   verdict_name(rep.product_verdict[mi]));
    }
    if (!rep.violations.empty())
        rep.failures.push_back("premise violations at " +
                               std::to_string(rep.violations.size()) + " checkpoints");
    rep.passed = rep.failures.empty();
    return rep;
}

WeakProductReport weak_positive_product_check(const MatrixSequence& a_seq,
                                              const MatrixSequence& b_seq,
                                              const MatrixTestSet& tests, double tol, int k) {
    if (a_seq.horizon != b_seq.horizon)
        throw DimensionError("weak_positive_product_check: sequence horizons differ");
    if (a_seq.dim != b_seq.dim)
        throw DimensionError("weak_positive_product_check: dimensions differ");

    WeakProductReport rep;
    rep.tol = tol;
    rep.k = k;
    rep.product_weak.mode = Mode::Weak;
    ResidualTrajectory b_weak;
    b_weak.mode = Mode::Weak;

    for (int n = 1; n <= a_seq.horizon; ++n) {
        const HermitianMatrix a = fetch(a_seq, n);
        const HermitianMatrix b = fetch(b_seq, n);
        if (!is_psd(a)) rep.violations.push_back({n, "positivity(a)", min_eigenvalue(a)});
        if (!is_psd(b)) rep.violations.push_back({n, "positivity(b)", min_eigenvalue(b)});

        const double norm_a = op_norm(a);
        const double norm_b = op_norm(b);
        rep.alpha = std::max(rep.alpha, norm_a);

        const DenseMatrix da = a.to_dense();
        const DenseMatrix db = b.to_dense();
        const double comm = op_norm(da * db - db * da);
        if (comm > 1e-10 * std::max(1.0, norm_a * norm_b))
            rep.violations.push_back({n, "commutation", comm});

        const HermitianMatrix product = HermitianMatrix::hermitian_part(da * db);
        double pv = 0.0, bv = 0.0;
        for (const auto& [x, y] : tests.pairs) {
            pv = std::max(pv, std::abs(inner(product.apply(x), y)));
            bv = std::max(bv, std::abs(inner(b.apply(x), y)));
        }
        rep.product_weak.values.push_back(pv);
        b_weak.values.push_back(bv);
    }

    rep.b_weak_verdict = classify(b_weak, tol, k);
    rep.product_verdict = classify(rep.product_weak, tol, k);
    if (rep.b_weak_verdict != Verdict::Convergent)
        rep.failures.push_back(std::string("premise: B_n is not weakly convergent (verdict ") +
                               verdict_name(rep.b_weak_verdict) + ")");
    else if (rep.product_verdict != Verdict::Convergent)
        rep.failures.push_back(std::string("product not weakly convergent (verdict ") +
                               verdict_name(rep.product_verdict) + ")");
    if (!rep.violations.empty())
        rep.failures.push_back("premise violations at " +
                               std::to_string(rep.violations.size()) + " checkpoints");
    rep.passed = rep.failures.empty();
    return rep;
}

BandWeakProductProbe weak_positive_product_probe(const BandSequence& a_seq,
                                                 const BandSequence& b_seq,
                                                 const BandTestSet& tests) {
    if (a_seq.horizon != b_seq.horizon)
        throw DimensionError("weak_positive_product_probe: sequence horizons differ");
    BandWeakProductProbe rep;
    rep.product_weak.mode = Mode::Weak;

    // Positivity probes: the test vectors and all their pairwise differences.
    std::vector<FinSuppVector> probes = tests.vectors;
    for (size_t i = 0; i < tests.vectors.size(); ++i)
        for (size_t j = i + 1; j < tests.vectors.size(); ++j)
            probes.push_back(tests.vectors[i].plus(tests.vectors[j].scaled(cplx(-1.0, 0.0))));

    for (int n = 1; n <= a_seq.horizon; ++n) {
        const BandOperator a = a_seq.element(n);
        const BandOperator b = b_seq.element(n);
        for (const FinSuppVector& v : probes) {
            const double qa = pairing(a, v, v).real();
            const double qb = pairing(b, v, v).real();
            const double floor = -1e-12 * std::max(1.0, v.norm() * v.norm());
            if (qa < floor) rep.violations.push_back({n, "positivity(a)", qa});
            if (qb < floor) rep.violations.push_back({n, "positivity(b)", qb});
        }
        const BandOperator product = band_compose(a, b);
        double pv = 0.0;
        for (const auto& [x, y] : tests.pairs)
            pv = std::max(pv, std::abs(pairing(product, x, y)));
        rep.product_weak.values.push_back(pv);
    }
    rep.rejected = !rep.violations.empty();
    return rep;
}

// ---- weak-topology utilities ------------------------------------------------------

double weak_quadratic_residual(const HermitianMatrix& a, const Vec& x) {
    return std::abs(inner(a.apply(x), x));
}

double weak_quadratic_residual(const BandOperator& a, const FinSuppVector& x) {
    return std::abs(pairing(a, x, x));
}

cplx polarization_pairing(const HermitianMatrix& a, const Vec& x, const Vec& y) {
    const auto q = [&a](const Vec& z) { return inner(a.apply(z), z); };
    const cplx i(0.0, 1.0);
    const cplx qpp = q(vec_add(x, y));
    const cplx qmm = q(vec_sub(x, y));
    const cplx qpi = q(vec_add(x, vec_scaled(y, i)));
    const cplx qmi = q(vec_sub(x, vec_scaled(y, i)));
    return 0.25 * ((qpp - qmm) + i * (qpi - qmi));
}

cplx polarization_pairing(const BandOperator& a, const FinSuppVector& x, const FinSuppVector& y) {
    const auto q = [&a](const FinSuppVector& z) { return pairing(a, z, z); };
    const cplx i(0.0, 1.0);
    const cplx qpp = q(x.plus(y));
    const cplx qmm = q(x.plus(y.scaled(cplx(-1.0, 0.0))));
    const cplx qpi = q(x.plus(y.scaled(i)));
    const cplx qmi = q(x.plus(y.scaled(-i)));
    return 0.25 * ((qpp - qmm) + i * (qpi - qmi));
}

}  // namespace opseq
