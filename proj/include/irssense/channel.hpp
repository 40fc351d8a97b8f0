#pragma once
/// Steering vectors, their angle derivatives, distance-power path loss,
/// scene geometry, and seeded random channel generation.
#include "irssense/types.hpp"

namespace irs {

enum class Link { BsIrs, IrsTarget };

/// ULA steering vector with the array center as phase reference:
/// element k (1-based) = exp(j*pi*(2k-1-n)*spacing*sin(theta)/wavelength).
VecC steering_irs(double theta, int n, const ArrayGeometry& geom);

/// d a(theta)/d theta = (j*pi*spacing*cos(theta)/wavelength) * D * a(theta)
/// with D = diag(1-n, 3-n, ..., n-1). Orthogonal to a(theta) for every theta.
VecC steering_derivative(double theta, int n, const ArrayGeometry& geom);

/// The centered index weights diag(D) = (1-n, 3-n, ..., n-1) as reals.
VecR centered_indices(int n);

/// Linear power gain 10^(k0_db/10) * (d/d0)^(-exponent), exponent per link.
double path_loss(double d, const PathLossModel& model, Link link);

/// Distances and angles from 2-D positions. Convention: each array's
/// broadside faces its peer terminal, so all angles land in (-pi/2, pi/2).
ScenarioGeometry geometry_from_positions(Vec2 bs, Vec2 irs, Vec2 target);

/// Target reflection coefficient: |alpha|^2 = rcs * L(d_it)^2 with a
/// seed-deterministic uniform phase.
cd target_coefficient(const ScenarioGeometry& scen, const PathLossModel& model,
                      double rcs, std::uint64_t seed);

/// One seeded channel draw. LoS builds the rank-1 geometric pair; Rayleigh
/// draws the forward link i.i.d. CSCG and derives the return link from the
/// shared part (exact transpose when m_t == m_r); Rician blends the two.
ChannelRealization gen_channel(ChannelKind kind, const ArrayGeometry& geom,
                               const ScenarioGeometry& scen, const PathLossModel& model,
                               double rcs, std::uint64_t seed, double k_factor = 1.0);

}  // namespace irs
