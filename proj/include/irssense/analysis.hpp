#pragma once
/// Closed-form expectation bounds on the optimized pattern-gain functionals,
/// crossover thresholds between the two architectures, and scaling-law
/// estimation from sweep data.
#include <optional>
#include <utility>
#include <vector>

#include "irssense/types.hpp"

namespace irs {

/// Gamma1: fully-passive SNR functional ||G_t^T Phi^T a||^2 ||G_r Phi^T a||^2.
/// Gamma2: semi-passive SNR functional ||G_t^T Phi^T a||^2.
/// Gamma3/Gamma4: the matching estimation-bound denominators (with the
/// steering-derivative weighting) for the two architectures.
enum class BoundQuantity { Gamma1, Gamma2, Gamma3, Gamma4 };

/// Expectation bounds on the optimized functional under i.i.d. Rayleigh
/// links, normalized to unit-variance channel entries.
struct BoundPair {
    double lower = 0;
    double upper = 0;
    BoundQuantity quantity = BoundQuantity::Gamma1;
};

enum class ThresholdKind { LosSnr, RayleighSnr };

/// Log-log least-squares fit of a power law value = c * n^slope.
struct ScalingFit {
    double slope = 0;
    double intercept = 0;    ///< log10(c)
    double r_squared = 0;
    std::pair<double, double> n_range{0, 0};
};

/// Closed-form lower/upper bounds on E[optimized functional]. The lower
/// bounds are achievability values of subset-aligning patterns and are only
/// meaningful once N covers the subsets; for very small N the polynomial
/// continuation can dip negative or cross the relaxation upper bound, so
/// the result is clamped into [0, upper]. Upper bounds are reported as
/// written.
BoundPair gamma_bounds(BoundQuantity quantity, int n, int m_t, int m_r);

/// Surface size beyond which the fully-passive architecture outperforms the
/// semi-passive one in average SNR. LosSnr: exact equality point 1/sqrt(l_d)
/// of the two line-of-sight closed forms. RayleighSnr: sufficient condition
/// from the expectation bounds (looser than the empirical crossover).
/// l_d is the linear surface-to-receiver path gain, in (0, 1].
double crossover_threshold(ThresholdKind kind, double l_d, int m_t, int m_r);

/// Fit slope of log10(value) against log10(n). Requires >= 4 points with
/// strictly increasing n and positive values.
ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points);

/// Drop points with n below 4*max(m_t, m_r) before a scaling fit: the
/// power laws are asymptotic in N and small-N points bias the slope.
std::vector<std::pair<double, double>> filter_asymptotic_points(
    const std::vector<std::pair<double, double>>& points, int m_t, int m_r);

/// Smallest grid N at which the fully-passive metric strictly beats the
/// semi-passive one and keeps beating it at every larger grid point
/// (persistence guards against Monte Carlo flicker). Both sweeps are
/// (n, value) pairs on identical n grids with at least two points; values
/// are "higher is better", so pass negated dB for bound minimization.
std::optional<int> find_crossover(const std::vector<std::pair<int, double>>& sweep_fully,
                                  const std::vector<std::pair<int, double>>& sweep_semi);

}  // namespace irs
