#pragma once
/// Seeding and complex-Gaussian sampling. Per-cell seeds are derived from
/// (master, n, trial, stream) with a splitmix64 mixer so any parallel
/// schedule of trials reproduces the serial results bit for bit.
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace irs {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based seed split: independent streams for channel draws,
/// optimizer randomization, etc., keyed by (n, trial, stream).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t n,
                                 std::uint64_t trial, std::uint64_t stream = 0) {
    std::uint64_t s = splitmix64(master ^ 0x6a09e667f3bcc909ULL);
    s = splitmix64(s ^ (n * 0x517cc1b727220a95ULL));
    s = splitmix64(s ^ (trial * 0x2545f4914f6cdd1dULL));
    return splitmix64(s ^ (stream * 0x9e3779b97f4a7c15ULL));
}

/// Deterministic generator with the distributions the library needs.
/// Box-Muller is hand-rolled because std::normal_distribution's sequence
/// is implementation-defined and would break cross-build reproducibility.
class Crng {
public:
    explicit Crng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // (0,1], never exactly 0 so log() below is safe
        return (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        spare_ = r * std::sin(ang);
        have_spare_ = true;
        return r * std::cos(ang);
    }

    /// Standard circularly-symmetric complex Gaussian, unit variance.
    std::complex<double> cgaussian() {
        const double re = gaussian() * M_SQRT1_2;
        const double im = gaussian() * M_SQRT1_2;
        return {re, im};
    }

    double uniform_phase() { return 2.0 * M_PI * uniform(); }

    std::uint64_t raw() { return eng_(); }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0;
};

}  // namespace irs
