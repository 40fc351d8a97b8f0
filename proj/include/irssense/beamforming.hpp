#pragma once
/// Transmit/reflective beamforming designs: the closed-form line-of-sight
/// optimum, benchmark and aligned-subset constructions, an SDR+SCA reference
/// solver with Gaussian randomization, a coordinate-ascent backend with
/// exact per-coordinate updates, and the alternating joint design that
/// minimizes the exact estimation bound.
#include <cstdint>
#include <optional>
#include <vector>

#include "irssense/types.hpp"

namespace irs {

enum class Backend { SdrSca, CoordinateAscent };
enum class BenchmarkKind { RandomPhases, Identity };
enum class AlignKind { AlignColumn, SplitAlign, DerivativeAlign };
enum class DesignObjective { Snr, Crb };

/// Converged: tolerance met. IterationLimit: budget exhausted first.
/// Failed: an inner conic solve diverged; the result holds the best
/// feasible iterate found before the failure.
enum class SolveStatus { Converged, IterationLimit, Failed };

struct OptimizerOptions {
    int sca_max_iter = 40;           ///< inner ascent sweeps / SCA iterations
    double sca_rel_tol = 1e-6;       ///< relative improvement stop threshold
    int randomization_samples = 500;
    Backend backend = Backend::SdrSca;
    double inner_sdp_tol = 1e-8;     ///< ADMM residual tolerance
    int alt_opt_max_rounds = 6;      ///< alternating rounds for joint designs
    std::uint64_t seed = 0;          ///< drives randomization and multistarts

    void validate() const;
};

struct BeamformingResult {
    ReflectPattern v;
    std::optional<TransmitCovariance> r;   ///< present for joint designs
    /// Accepted objective milestones: nondecreasing for SNR maximization,
    /// nonincreasing (exact bound values) for bound minimization.
    std::vector<double> objective_trace;
    /// Upper bound from the lifted relaxation (SdrSca only); the achieved
    /// objective never exceeds it.
    std::optional<double> relaxation_bound;
    SolveStatus status = SolveStatus::Converged;
};

/// Reflection phases that cancel the round-trip aperture phase for a
/// line-of-sight pair: phi_k = -pi (d/lambda) idx_k (sin theta + sin theta2)
/// with idx the centered element indices. Achieves pattern gain N^2.
ReflectPattern los_optimal_phases(double theta, double theta2,
                                  const ArrayGeometry& geom);

/// RandomPhases: i.i.d. uniform phases, reproducible from the seed.
/// Identity: all-zero phases.
ReflectPattern benchmark_pattern(BenchmarkKind kind, int n, std::uint64_t seed);

/// Subset-aligning constructions against a channel column g_hat(:, col) and
/// the steering vector at theta. AlignColumn compensates both phases on
/// every element; SplitAlign compensates only the steering phase on the
/// first floor(N/2) elements; DerivativeAlign aligns against the steering
/// derivative instead (falling back to the steering phase on elements where
/// the derivative vanishes).
ReflectPattern appendix_aligned_pattern(AlignKind kind, const MatC& g_hat, int col,
                                        double theta, const ArrayGeometry& geom);

/// Maximize the pattern-gain product that multiplies P0 |alpha|^2 / sigma2
/// in the echo SNR under maximum-ratio transmission: for the fully-passive
/// architecture (v^H R1 v)(v^H R2 v) with R1 = diag(a)^H G_r^H G_r diag(a)
/// and R2 = diag(a)^H G_t^* G_t^T diag(a); for the semi-passive one
/// M_r (v^H R2 v). SdrSca solves the unit-diagonal lifted relaxation (the
/// product case through its linearized square surrogate) and Gaussian-
/// randomizes; CoordinateAscent updates one phase at a time, each update
/// exactly optimal for its coordinate. The result carries no covariance:
/// pair the pattern with mrt_covariance to realize the SNR.
BeamformingResult maximize_snr(Arch arch, const ChannelRealization& ch, double theta,
                               const ArrayGeometry& geom, const OptimizerOptions& opts);

/// Joint transmit-covariance / reflection design minimizing the exact
/// angle-estimation bound: alternates a reflection step (per-coordinate
/// exact ascent of the Fisher denominator, or the lifted SCA surrogate with
/// randomization, by backend) with a covariance step (Schur-complement SDP
/// plus a blend line search), accepting a move only when the exact bound
/// decreases. Stops when a round improves the bound by less than
/// sca_rel_tol relatively or after alt_opt_max_rounds. Throws
/// NumericalError when the bound is already unbounded at initialization
/// (increase N or the transmit covariance rank).
BeamformingResult minimize_crb(Arch arch, const ChannelRealization& ch,
                               const ArrayGeometry& geom, const SensingSpec& spec,
                               double p0, const OptimizerOptions& opts);

/// Reflection-only variant of minimize_crb: the transmit covariance stays
/// at r_fixed and only the phase pattern moves. The result's covariance is
/// r_fixed passed through.
BeamformingResult minimize_crb_reflective(Arch arch, const ChannelRealization& ch,
                                          const ArrayGeometry& geom,
                                          const SensingSpec& spec,
                                          const TransmitCovariance& r_fixed,
                                          const OptimizerOptions& opts);

/// Transmit-side-only design for a fixed reflection pattern: Snr returns
/// the maximum-ratio covariance, Crb the covariance step of the joint
/// design (never worse than isotropic on the exact bound).
TransmitCovariance transmit_only_design(Arch arch, const ChannelRealization& ch,
                                        const ReflectPattern& v_fixed,
                                        DesignObjective objective, double p0,
                                        const SensingSpec& spec,
                                        const OptimizerOptions& opts);

}  // namespace irs
