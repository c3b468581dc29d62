#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

namespace opseq {

// Identity string recorded in every report header. The engine is
// std::mt19937_64 (bit-exact by the language standard); normals come from a
// hand-rolled Box-Muller transform because std::normal_distribution's output
// is implementation-defined and reports must be reproducible byte for byte.
inline constexpr const char* kPrngIdentity = "mt19937_64+boxmuller";

namespace detail {
inline std::uint64_t splitmix_step(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
}  // namespace detail

// Stable derivation of independent stream seeds from one root seed, so that
// element n of a generated sequence never depends on how many draws earlier
// elements consumed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index) {
    using detail::splitmix_step;
    return splitmix_step(splitmix_step(splitmix_step(root) ^ stream) ^ index);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform in [0, 1) with the full 53-bit mantissa.
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // One Box-Muller pair per call; no state is cached between calls.
    std::pair<double, double> gaussian_pair() {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));  // log(1-u1), safe at u1=0
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        return {r * std::cos(theta), r * std::sin(theta)};
    }

    // Standard complex Gaussian: one Box-Muller pair makes one entry.
    std::complex<double> gaussian_complex() {
        const auto [re, im] = gaussian_pair();
        return {re, im};
    }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

}  // namespace opseq
