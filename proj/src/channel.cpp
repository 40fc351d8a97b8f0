#include "irssense/channel.hpp"

#include <cmath>

#include "irssense/rng.hpp"

namespace irs {
namespace {

double hypot2(double dx, double dy) { return std::sqrt(dx * dx + dy * dy); }

/// Angle of `to` seen from `from` for an x-aligned array whose broadside
/// points toward `face`: positive toward +x, valid only strictly inside
/// (-pi/2, pi/2) so sin(theta) stays unambiguous.
double array_angle(Vec2 from, Vec2 to, Vec2 face) {
    const double fy = face.y - from.y;
    if (fy == 0.0)
        throw ValidationError("degenerate geometry: array broadside undefined (peer in array plane)");
    const double sgn = fy > 0 ? 1.0 : -1.0;
    const double dx = to.x - from.x;
    const double dy = sgn * (to.y - from.y);
    if (dy <= 0.0)
        throw ValidationError("degenerate geometry: angle outside (-pi/2, pi/2)");
    return std::atan2(dx, dy);
}

MatC draw_cscg(Crng& rng, int rows, int cols) {
    MatC m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.cgaussian();
    return m;
}

}  // namespace

VecC steering_irs(double theta, int n, const ArrayGeometry& geom) {
    if (n < 1) throw ValidationError("steering: n must be >= 1");
    const double scale = M_PI * geom.spacing * std::sin(theta) / geom.wavelength;
    VecC a(n);
    for (int k = 1; k <= n; ++k) {
        const double phase = scale * (2 * k - 1 - n);
        a(k - 1) = cd(std::cos(phase), std::sin(phase));
    }
    return a;
}

VecC steering_derivative(double theta, int n, const ArrayGeometry& geom) {
    const VecC a = steering_irs(theta, n, geom);
    const double c = M_PI * geom.spacing * std::cos(theta) / geom.wavelength;
    VecC da(n);
    for (int k = 1; k <= n; ++k) da(k - 1) = cd(0, c * (2 * k - 1 - n)) * a(k - 1);
    return da;
}

VecR centered_indices(int n) {
    VecR d(n);
    for (int k = 1; k <= n; ++k) d(k - 1) = 2 * k - 1 - n;
    return d;
}

double path_loss(double d, const PathLossModel& model, Link link) {
    model.validate();
    if (d <= 0) throw ValidationError("path_loss: distance must be > 0");
    const double expo = link == Link::BsIrs ? model.exponent_bs_irs : model.exponent_irs_target;
    return std::pow(10.0, model.k0_db / 10.0) * std::pow(d / model.d0, -expo);
}

ScenarioGeometry geometry_from_positions(Vec2 bs, Vec2 irs, Vec2 target) {
    ScenarioGeometry g;
    g.bs_pos = bs;
    g.irs_pos = irs;
    g.target_pos = target;
    g.d_bi = hypot2(irs.x - bs.x, irs.y - bs.y);
    g.d_it = hypot2(target.x - irs.x, target.y - irs.y);
    if (g.d_bi == 0 || g.d_it == 0 ||
        (bs.x == target.x && bs.y == target.y))
        throw ValidationError("geometry: positions must be pairwise distinct");
    // BS array faces the surface; the surface array faces the target.
    g.theta1 = array_angle(bs, irs, irs);
    g.theta = array_angle(irs, target, target);
    g.theta2 = array_angle(irs, bs, target);
    return g;
}

cd target_coefficient(const ScenarioGeometry& scen, const PathLossModel& model,
                      double rcs, std::uint64_t seed) {
    if (rcs <= 0) throw ValidationError("target_coefficient: rcs must be > 0");
    const double l_it = path_loss(scen.d_it, model, Link::IrsTarget);
    const double mag = std::sqrt(rcs) * l_it;  // |alpha|^2 = rcs * L(d_it)^2
    Crng rng(seed);
    const double ph = rng.uniform_phase();
    return cd(mag * std::cos(ph), mag * std::sin(ph));
}

ChannelRealization gen_channel(ChannelKind kind, const ArrayGeometry& geom,
                               const ScenarioGeometry& scen, const PathLossModel& model,
                               double rcs, std::uint64_t seed, double k_factor) {
    geom.validate();
    const double l_bi = path_loss(scen.d_bi, model, Link::BsIrs);
    const double root_l = std::sqrt(l_bi);
    const int n = geom.n, mt = geom.m_t, mr = geom.m_r;

    ChannelRealization ch;
    ch.kind = kind;
    ch.k_factor = kind == ChannelKind::Rician ? k_factor : 0.0;
    ch.seed_used = seed;
    ch.array = geom;
    ch.theta = scen.theta;

    const VecC a2 = steering_irs(scen.theta2, n, geom);
    const VecC c1 = steering_irs(scen.theta1, mt, geom);
    const VecC b1 = steering_irs(scen.theta1, mr, geom);
    const MatC los_t = a2 * c1.transpose();       // N x M_t
    const MatC los_r = b1 * a2.transpose();       // M_r x N

    if (kind == ChannelKind::Los) {
        ch.g_t = root_l * los_t;
        ch.g_r = root_l * los_r;
    } else {
        Crng rng(splitmix64(seed));
        const int kmin = std::min(mt, mr);
        // Shared scattering part first, then the per-direction residues, in a
        // fixed draw order so seeds mean the same thing for every (mt, mr).
        const MatC common = draw_cscg(rng, n, kmin);
        MatC gt_hat(n, mt), gr_hat(mr, n);
        gt_hat.leftCols(kmin) = common;
        if (mt > kmin) gt_hat.rightCols(mt - kmin) = draw_cscg(rng, n, mt - kmin);
        gr_hat.topRows(kmin) = common.transpose();
        if (mr > kmin) gr_hat.bottomRows(mr - kmin) = draw_cscg(rng, mr - kmin, n);

        if (kind == ChannelKind::Rayleigh) {
            ch.g_t = root_l * gt_hat;
            ch.g_r = root_l * gr_hat;
        } else {
            if (k_factor < 0) throw ValidationError("gen_channel: Rician factor must be >= 0");
            const double w_los = std::sqrt(k_factor / (1.0 + k_factor));
            const double w_nlos = std::sqrt(1.0 / (1.0 + k_factor));
            ch.g_t = root_l * (w_los * los_t + w_nlos * gt_hat);
            ch.g_r = root_l * (w_los * los_r + w_nlos * gr_hat);
        }
    }
    ch.alpha = target_coefficient(scen, model, rcs, splitmix64(seed ^ 0xa1fa5eedULL));
    return ch;
}

}  // namespace irs
