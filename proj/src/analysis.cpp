#include "irssense/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace irs {
namespace {

/// Shared factor of the Gamma1/Gamma3 upper bounds: the sum-power
/// relaxation of E[gamma_1*] divided by N^2.
double relaxed_product_factor(double n, double kmin, double mt, double mr) {
    return (mt + mr + (1.0 - 3.0 * kmin) / 2.0) * kmin * n * n + 2.0 * kmin * n;
}

}  // namespace

BoundPair gamma_bounds(BoundQuantity quantity, int n, int m_t, int m_r) {
    if (n < 1 || m_t < 1 || m_r < 1)
        throw ValidationError("gamma_bounds arguments must be >= 1");
    const double nn = n, mt = m_t, mr = m_r;
    const double kmin = std::min(mt, mr), kmax = std::max(mt, mr);
    BoundPair out;
    out.quantity = quantity;
    switch (quantity) {
        case BoundQuantity::Gamma1:
            out.lower = nn * nn * (M_PI * (nn - 1.0) / 4.0 + kmin) *
                        (M_PI * (nn - 1.0) / 4.0 + kmax);
            out.upper = nn * nn * relaxed_product_factor(nn, kmin, mt, mr);
            break;
        case BoundQuantity::Gamma2:
            out.lower = M_PI * nn * (nn - 1.0) / 4.0 + mt * nn;
            out.upper = mt * nn * nn;
            break;
        case BoundQuantity::Gamma3:
            out.lower = nn * nn * nn * nn * (nn - 4.0) * (nn - 6.0) / 512.0 +
                        (nn - 1.0) * nn * (nn + 1.0) / 3.0 *
                            (M_PI / 8.0 * (nn - 3.0) * (nn - 4.0) +
                             M_PI * M_PI / 64.0 * (nn - 4.0) * (nn - 6.0) +
                             2.0 * nn - 1.0) +
                        2.0 * nn * nn * nn * nn * nn / 3.0 +
                        nn * nn * nn * nn / 32.0 * (4.0 - 5.0 * M_PI);
            out.upper = 2.0 * nn * nn * (nn * nn - 1.0) / 3.0 *
                        relaxed_product_factor(nn, kmin, mt, mr);
            break;
        case BoundQuantity::Gamma4:
            out.lower = M_PI * mr * nn * nn * nn * nn / 16.0 +
                        mr * (mt - 1.0) * nn * nn / 2.0;
            out.upper = mt * mr * (mr * mr - 1.0) * nn * nn / 3.0 +
                        mt * mr * nn * nn * (nn * nn - 1.0) / 3.0;
            break;
    }
    // subset-aligning achievability values are vacuous below the subset
    // sizes; keep them in [0, upper] there
    out.lower = std::max(0.0, std::min(out.lower, out.upper));
    return out;
}

double crossover_threshold(ThresholdKind kind, double l_d, int m_t, int m_r) {
    if (!(l_d > 0.0) || l_d > 1.0)
        throw ValidationError("path gain l_d must be in (0, 1]");
    if (m_t < 1 || m_r < 1) throw ValidationError("antenna counts must be >= 1");
    if (kind == ThresholdKind::LosSnr) return 1.0 / std::sqrt(l_d);
    const double mt = m_t, mr = m_r;
    const double kmin = std::min(mt, mr), kmax = std::max(mt, mr);
    const double s = (mt + mr) * (mt + mr) + 4.0 * (mt * mr / l_d - kmin * kmax);
    return 2.0 / M_PI * std::sqrt(s) - 2.0 * (mt + mr) / M_PI + 1.0;
}

ScalingFit fit_scaling_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4)
        throw ValidationError("scaling fit needs at least 4 points");
    const auto np = points.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < np; ++i) {
        const auto& [n, value] = points[i];
        if (!(n > 0) || !(value > 0))
            throw ValidationError("scaling fit needs positive n and values");
        if (i > 0 && n <= points[i - 1].first)
            throw ValidationError("scaling fit needs strictly increasing n");
        const double x = std::log10(n), y = std::log10(value);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = np * sxx - sx * sx;
    ScalingFit fit;
    fit.slope = (np * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / np;
    double ss_res = 0, ss_tot = 0;
    const double y_mean = sy / np;
    for (const auto& [n, value] : points) {
        const double y = std::log10(value);
        const double e = y - (fit.intercept + fit.slope * std::log10(n));
        ss_res += e * e;
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.n_range = {points.front().first, points.back().first};
    return fit;
}

std::vector<std::pair<double, double>> filter_asymptotic_points(
    const std::vector<std::pair<double, double>>& points, int m_t, int m_r) {
    const double n_min = 4.0 * std::max(m_t, m_r);
    std::vector<std::pair<double, double>> kept;
    for (const auto& p : points)
        if (p.first >= n_min) kept.push_back(p);
    return kept;
}

std::optional<int> find_crossover(const std::vector<std::pair<int, double>>& sweep_fully,
                                  const std::vector<std::pair<int, double>>& sweep_semi) {
    if (sweep_fully.size() != sweep_semi.size())
        throw ValidationError("crossover sweeps must share one n grid");
    if (sweep_fully.size() < 2)
        throw ValidationError("crossover needs at least 2 grid points");
    const auto np = sweep_fully.size();
    for (std::size_t i = 0; i < np; ++i)
        if (sweep_fully[i].first != sweep_semi[i].first)
            throw ValidationError("crossover sweeps must share one n grid");
    // scan backwards: the persistent crossover is the start of the longest
    // strictly-better suffix
    std::optional<int> cross;
    for (std::size_t i = np; i-- > 0;) {
        if (sweep_fully[i].second > sweep_semi[i].second)
            cross = sweep_fully[i].first;
        else
            break;
    }
    return cross;
}

}  // namespace irs
