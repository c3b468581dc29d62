#include "generators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace opseq {

namespace {

DenseMatrix gaussian_matrix(int dim, Rng& rng) {
    DenseMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) g.at(i, j) = rng.gaussian_complex();
    return g;
}

}  // namespace

HermitianMatrix rand_hermitian(int dim, std::uint64_t seed, double scale) {
    if (dim < 1) throw DimensionError("rand_hermitian: dim must be >= 1");
    Rng rng(derive_seed(seed, 11, static_cast<std::uint64_t>(dim)));
    const DenseMatrix g = gaussian_matrix(dim, rng);
    HermitianMatrix h = HermitianMatrix::hermitian_part(g);
    const double nrm = op_norm(h);
    return nrm > 0.0 ? h.scaled(scale / nrm) : h;
}

HermitianMatrix rand_psd(int dim, std::uint64_t seed, double scale) {
    if (dim < 1) throw DimensionError("rand_psd: dim must be >= 1");
    Rng rng(derive_seed(seed, 12, static_cast<std::uint64_t>(dim)));
    const DenseMatrix g = gaussian_matrix(dim, rng);
    HermitianMatrix h = HermitianMatrix::hermitian_part(g.adjoint() * g);
    const double nrm = op_norm(h);
    return nrm > 0.0 ? h.scaled(scale / nrm) : h;
}

DenseMatrix seeded_unitary(int dim, std::uint64_t seed) {
    if (dim < 1) throw DimensionError("seeded_unitary: dim must be >= 1");
    Rng rng(derive_seed(seed, 13, static_cast<std::uint64_t>(dim)));
    DenseMatrix q = gaussian_matrix(dim, rng);
    // Modified Gram-Schmidt over columns, run twice for orthogonality at
    // working precision.
    for (int pass = 0; pass < 2; ++pass) {
        for (int j = 0; j < dim; ++j) {
            for (int p = 0; p < j; ++p) {
                cplx proj(0.0, 0.0);
                for (int i = 0; i < dim; ++i) proj += std::conj(q.at(i, p)) * q.at(i, j);
                for (int i = 0; i < dim; ++i) q.at(i, j) -= proj * q.at(i, p);
            }
            double nrm = 0.0;
            for (int i = 0; i < dim; ++i) nrm += std::norm(q.at(i, j));
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12) {
                // Gaussian columns are almost surely independent; if one
                // degenerates anyway, restart it from a basis vector.
                for (int i = 0; i < dim; ++i) q.at(i, j) = cplx(i == j ? 1.0 : 0.0, 0.0);
                --j;
                continue;
            }
            for (int i = 0; i < dim; ++i) q.at(i, j) /= nrm;
        }
    }
    return q;
}

Vec rand_unit_vector(int dim, Rng& rng) {
    if (dim < 1) throw DimensionError("rand_unit_vector: dim must be >= 1");
    Vec v(static_cast<size_t>(dim));
    double nrm = 0.0;
    do {
        for (int i = 0; i < dim; ++i) v[static_cast<size_t>(i)] = rng.gaussian_complex();
        nrm = vec_norm(v);
    } while (nrm < 1e-12);
    return vec_scaled(v, cplx(1.0 / nrm, 0.0));
}

std::vector<HermitianMatrix> rand_commuting_family(int dim, int count, std::uint64_t seed,
                                                   double lo, double hi) {
    if (dim < 1) throw DimensionError("rand_commuting_family: dim must be >= 1");
    if (count < 1) throw DimensionError("rand_commuting_family: count must be >= 1");
    if (!(lo <= hi)) throw DimensionError("rand_commuting_family: need lo <= hi");
    const DenseMatrix q = seeded_unitary(dim, derive_seed(seed, 14, 0));
    const DenseMatrix qh = q.adjoint();
    Rng rng(derive_seed(seed, 14, 1));
    std::vector<HermitianMatrix> out;
    out.reserve(static_cast<size_t>(count));
    for (int c = 0; c < count; ++c) {
        DenseMatrix d(dim, dim);
        for (int i = 0; i < dim; ++i) d.at(i, i) = cplx(rng.uniform(lo, hi), 0.0);
        out.push_back(HermitianMatrix::hermitian_part(q * d * qh));
    }
    return out;
}

// ---- decay schedules ---------------------------------------------------------

DecaySchedule DecaySchedule::harmonic(double K) {
    if (!(K > 0.0)) throw Error("decay schedule: harmonic K must be positive");
    DecaySchedule s;
    s.kind_ = Kind::Harmonic;
    s.k_ = K;
    s.text_ = "harmonic:" + std::to_string(K);
    return s;
}

DecaySchedule DecaySchedule::geometric(double K, double r) {
    if (!(K > 0.0)) throw Error("decay schedule: geometric K must be positive");
    if (!(r > 0.0 && r < 1.0)) throw Error("decay schedule: geometric r must be in (0, 1)");
    DecaySchedule s;
    s.kind_ = Kind::Geometric;
    s.k_ = K;
    s.r_ = r;
    s.text_ = "geometric:" + std::to_string(K) + ":" + std::to_string(r);
    return s;
}

DecaySchedule DecaySchedule::from_table(std::vector<double> v) {
    if (v.empty()) throw Error("decay schedule: table must be nonempty");
    for (double x : v)
        if (!(x > 0.0)) throw Error("decay schedule: table entries must be positive");
    DecaySchedule s;
    s.kind_ = Kind::Table;
    s.table_ = std::move(v);
    s.text_ = "table[" + std::to_string(s.table_.size()) + "]";
    return s;
}

double DecaySchedule::rate(int n) const {
    if (n < 1) throw Error("decay schedule: index must be >= 1");
    switch (kind_) {
        case Kind::Harmonic: return k_ / n;
        case Kind::Geometric: return k_ * std::pow(r_, n);
        case Kind::Table: {
            const size_t i = std::min(static_cast<size_t>(n) - 1, table_.size() - 1);
            return table_[i];
        }
    }
    return k_;
}

// ---- sandwich instances ---------------------------------------------------------

SandwichInstance make_sandwich_instance(const HermitianMatrix& limit,
                                        const DecaySchedule& schedule, int n_max,
                                        std::uint64_t seed, std::function<double(int)> mix) {
    const int dim = limit.dim();
    if (dim < 1) throw DimensionError("make_sandwich_instance: limit must have dim >= 1");
    if (n_max < 1) throw DimensionError("make_sandwich_instance: n_max must be >= 1");

    auto lower = std::make_shared<std::vector<HermitianMatrix>>();
    auto middle = std::make_shared<std::vector<HermitianMatrix>>();
    auto upper = std::make_shared<std::vector<HermitianMatrix>>();
    lower->reserve(static_cast<size_t>(n_max));
    middle->reserve(static_cast<size_t>(n_max));
    upper->reserve(static_cast<size_t>(n_max));

    Rng mix_rng(derive_seed(seed, 15, 0));
    for (int n = 1; n <= n_max; ++n) {
        const double t = schedule.rate(n);
        const HermitianMatrix p = rand_psd(dim, derive_seed(seed, 16, static_cast<std::uint64_t>(n)));
        const HermitianMatrix q = rand_psd(dim, derive_seed(seed, 17, static_cast<std::uint64_t>(n)));
        const HermitianMatrix c = limit - p.scaled(t);
        const HermitianMatrix b = limit + q.scaled(t);
        double s = mix ? mix(n) : mix_rng.uniform();
        s = std::clamp(s, 0.0, 1.0);
        const HermitianMatrix a = c + (b - c).scaled(s);
        lower->push_back(c);
        middle->push_back(a);
        upper->push_back(b);
    }

    SandwichInstance inst;
    inst.lower = {n_max, dim, [lower](int n) { return (*lower)[static_cast<size_t>(n - 1)]; }};
    inst.middle = {n_max, dim, [middle](int n) { return (*middle)[static_cast<size_t>(n - 1)]; }};
    inst.upper = {n_max, dim, [upper](int n) { return (*upper)[static_cast<size_t>(n - 1)]; }};
    inst.limit = limit;
    return inst;
}

// ---- interval counterexample search ----------------------------------------------

std::optional<IntervalWitness> search_interval_counterexample(int dim, std::uint64_t seed,
                                                              int max_trials) {
    if (dim < 1) throw DimensionError("search_interval_counterexample: dim must be >= 1");
    if (dim == 1) return std::nullopt;  // scalars: -b <= a <= b forces |a| <= b

    Rng rng(derive_seed(seed, 18, static_cast<std::uint64_t>(dim)));
    for (int trial = 1; trial <= max_trials; ++trial) {
        // A: a +/-1 diagonal with both signs present; B: (1+eps) I plus one
        // symmetric coupling of strength delta across a mixed-sign pair.
        // With delta^2 < eps (2 + eps) both order premises hold, while
        // B - |A| = eps I + delta (coupling) picks up the eigenvalue
        // eps - delta < 0.
        std::vector<double> sign(static_cast<size_t>(dim));
        for (double& s : sign) s = rng.uniform() < 0.5 ? -1.0 : 1.0;
        sign[static_cast<size_t>(rng.raw() % static_cast<std::uint64_t>(dim))] = 1.0;
        std::vector<int> pos, neg;
        for (int i = 0; i < dim; ++i) (sign[static_cast<size_t>(i)] > 0 ? pos : neg).push_back(i);
        if (neg.empty()) {
            neg.push_back(pos.back());
            sign[static_cast<size_t>(pos.back())] = -1.0;
            pos.pop_back();
        }
        const int ip = pos[rng.raw() % pos.size()];
        const int in = neg[rng.raw() % neg.size()];

        const double eps = 0.05 + 0.15 * rng.uniform();
        const double delta = 0.8 * std::sqrt(eps * (2.0 + eps));

        HermitianMatrix a = HermitianMatrix::diagonal(sign);
        HermitianMatrix b = HermitianMatrix::identity(dim).scaled(1.0 + eps);
        b.set(std::max(ip, in), std::min(ip, in), cplx(delta, 0.0));

        IntervalWitness w;
        w.a = a;
        w.b = b;
        w.premise_lower_min = min_eigenvalue(b + a);
        w.premise_upper_min = min_eigenvalue(b - a);
        w.violation_min = min_eigenvalue(b - abs_op(a));
        w.trials_used = trial;
        const bool premises_ok = loewner_leq(a.scaled(-1.0), b) && loewner_leq(a, b);
        if (premises_ok && w.violation_min < -1e-6) return w;
    }
    return std::nullopt;
}

// ---- default test sets (declared in convergence.hpp) -------------------------------

MatrixTestSet default_matrix_tests(int dim, std::uint64_t seed) {
    if (dim < 1) throw DimensionError("default_matrix_tests: dim must be >= 1");
    MatrixTestSet t;
    for (int i = 0; i < dim; ++i) {
        Vec e(static_cast<size_t>(dim), cplx(0.0, 0.0));
        e[static_cast<size_t>(i)] = cplx(1.0, 0.0);
        t.vectors.push_back(std::move(e));
    }
    Rng rng(derive_seed(seed, 19, static_cast<std::uint64_t>(dim)));
    for (int i = 0; i < 8; ++i) t.vectors.push_back(rand_unit_vector(dim, rng));
    for (const Vec& v : t.vectors) t.pairs.emplace_back(v, v);
    for (int i = 0; i < 8; ++i)
        t.pairs.emplace_back(rand_unit_vector(dim, rng), rand_unit_vector(dim, rng));
    return t;
}

BandTestSet default_band_tests(std::uint64_t seed) {
    BandTestSet t;
    for (long j = 0; j <= 8; ++j) t.vectors.push_back(FinSuppVector::unit(j));
    Rng rng(derive_seed(seed, 20, 0));
    for (int r = 0; r < 2; ++r) {
        FinSuppVector v;
        for (long j = 0; j <= 16; ++j) v.set(j, rng.gaussian_complex());
        const double nrm = v.norm();
        t.vectors.push_back(v.scaled(cplx(1.0 / nrm, 0.0)));
    }
    for (const FinSuppVector& v : t.vectors) t.pairs.emplace_back(v, v);
    const size_t m = t.vectors.size();
    for (int r = 0; r < 8; ++r) {
        const size_t i = rng.raw() % m;
        const size_t j = rng.raw() % m;
        t.pairs.emplace_back(t.vectors[i], t.vectors[j]);
    }
    return t;
}

}  // namespace opseq
