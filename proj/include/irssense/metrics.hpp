#pragma once
/// Sensing SNR, exact and approximate DoA estimation bounds, detection
/// probability, the Marcum Q1 special function, and a finite-difference
/// Fisher-information oracle.
#include "irssense/types.hpp"

namespace irs {

/// Effective transmit/receive responses under a reflect pattern:
/// p_t = G_t^T diag(a) v and its angle derivative, plus the receive pair
/// (through G_r for the fully-passive echo, the sensor steering vector for
/// the semi-passive one).
struct EffectiveResponse {
    VecC p_t;    ///< effective transmit response, length M_t
    VecC dp_t;   ///< its derivative w.r.t. the target angle
    VecC p_r;    ///< receive response (fully: G_r diag(a) v; semi: sensor steering)
    VecC dp_r;   ///< its derivative
};

/// Assemble the four effective vectors for the given architecture.
EffectiveResponse effective_response(Arch arch, const ReflectPattern& v,
                                     const ChannelRealization& ch);

/// Post-beamforming echo SNR. Linear in P0 and |alpha|^2, inverse in sigma2.
double snr(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
           const ChannelRealization& ch, const SensingSpec& spec);

/// Rank-one covariance aligned with the effective transmit response,
/// trace exactly p0. Throws on a vanishing effective channel.
TransmitCovariance mrt_covariance(const ReflectPattern& v,
                                  const ChannelRealization& ch, double p0);

/// Exact angle-estimation bound, including the correlation-correction terms
/// subtracted inside the Fisher denominator. Throws NumericalError when the
/// denominator falls below the estimability threshold (e.g. a rank-one
/// forward link with a fully-passive receiver).
double crb(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
           const ChannelRealization& ch, const SensingSpec& spec);

/// Dominant-term approximation of the bound: drops both subtracted
/// correlation terms, so crb_approx <= crb on identical inputs.
double crb_approx(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
                  const ChannelRealization& ch, const SensingSpec& spec);

/// First-order Marcum Q function, absolute error below 1e-10. Evaluated by
/// the Poisson-mixture series with a tail bound of 1e-14, window-centred so
/// large noncentralities do not underflow.
double marcum_q1(double a, double b);

/// Detection probability of the amplitude-unknown matched detector at
/// false-alarm rate spec.p_fa: Q1(sqrt(2 T snr), sqrt(2 ln(1/p_fa))).
double detection_probability(Arch arch, const TransmitCovariance& r,
                             const ReflectPattern& v, const ChannelRealization& ch,
                             const SensingSpec& spec);

/// Fisher information for (theta, Re alpha, Im alpha) assembled from central
/// finite differences of the noise-free mean map. Independent oracle for crb:
/// the Schur complement of the theta entry inverts to crb within 1e-4
/// relative at fd_step = 1e-6.
MatR fisher_numeric(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
                    const ChannelRealization& ch, const SensingSpec& spec,
                    double fd_step);

/// Denominator threshold below which the bound is treated as unbounded.
inline constexpr double kUnboundedThreshold = 1e-18;

}  // namespace irs
