#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "convergence.hpp"
#include "rng.hpp"

namespace opseq {

// Seeded Hermitian matrix with operator norm exactly rescaled to `scale`
// (Gaussian ensemble, Hermitian part).
HermitianMatrix rand_hermitian(int dim, std::uint64_t seed, double scale = 1.0);

// Seeded PSD matrix G* G, rescaled to operator norm `scale`.
HermitianMatrix rand_psd(int dim, std::uint64_t seed, double scale = 1.0);

// Seeded unitary via modified Gram-Schmidt (with one re-orthogonalization
// pass) on a Gaussian matrix.
DenseMatrix seeded_unitary(int dim, std::uint64_t seed);

Vec rand_unit_vector(int dim, Rng& rng);

// `count` Hermitian matrices sharing one seeded eigenbasis, spectra drawn
// uniformly from [lo, hi]. Pairwise commutators vanish up to rounding.
std::vector<HermitianMatrix> rand_commuting_family(int dim, int count, std::uint64_t seed,
                                                   double lo = -1.0, double hi = 1.0);

// ---------------------------------------------------------------------------
// Decay schedule t_n > 0 shaping how fast sandwich gaps close.
// ---------------------------------------------------------------------------
class DecaySchedule {
  public:
    static DecaySchedule harmonic(double K);               // K / n
    static DecaySchedule geometric(double K, double r);     // K * r^n, 0 < r < 1
    static DecaySchedule from_table(std::vector<double> v);  // v[n-1], clamped at the end

    double rate(int n) const;  // n >= 1
    const std::string& describe() const { return text_; }

  private:
    enum class Kind { Harmonic, Geometric, Table } kind_ = Kind::Harmonic;
    double k_ = 1.0, r_ = 0.5;
    std::vector<double> table_;
    std::string text_;
};

// Seeded squeeze instance around `limit`:
//   lower_n  = limit - t_n * P_n        (P_n seeded PSD, norm 1)
//   upper_n  = limit + t_n * Q_n        (Q_n seeded PSD, norm 1)
//   middle_n = lower_n + s_n * (upper_n - lower_n),  s_n in [0, 1]
// so lower_n <= middle_n <= upper_n holds by construction and all three
// converge to `limit` at the schedule's rate. The mixing weights s_n are
// seeded uniforms unless `mix` overrides them (values are clamped to [0,1]).
// Elements are precomputed; the returned closures only index a cache.
SandwichInstance make_sandwich_instance(const HermitianMatrix& limit,
                                        const DecaySchedule& schedule, int n_max,
                                        std::uint64_t seed,
                                        std::function<double(int)> mix = {});

// A pair -B <= A <= B whose modulus escapes the would-be interval bound:
// min_eig(B - |A|) is reported as `violation_min` and is negative.
struct IntervalWitness {
    HermitianMatrix a, b;
    double premise_lower_min;  // min eigenvalue of A + B   (>= 0 up to tol)
    double premise_upper_min;  // min eigenvalue of B - A   (>= 0 up to tol)
    double violation_min;      // min eigenvalue of B - |A| (< 0: the escape)
    int trials_used = 0;
};

// Randomized search for an IntervalWitness. Returns nullopt for dim < 2
// (in dimension one -B <= A <= B really does force |A| <= B) or if no trial
// verifies within max_trials. Every returned witness is re-verified.
std::optional<IntervalWitness> search_interval_counterexample(int dim, std::uint64_t seed,
                                                              int max_trials = 64);

}  // namespace opseq
