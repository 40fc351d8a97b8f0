#include "irssense/metrics.hpp"

#include <cmath>
#include <limits>

#include "irssense/channel.hpp"

namespace irs {
namespace {

void check_dims(const ReflectPattern& v, const ChannelRealization& ch) {
    const int n = ch.array.n;
    if (v.size() != n || ch.g_t.rows() != n || ch.g_r.cols() != n)
        throw ValidationError("pattern/channel dimension mismatch");
    if (ch.g_t.cols() != ch.array.m_t || ch.g_r.rows() != ch.array.m_r)
        throw ValidationError("channel antenna counts disagree with the array");
}

void check_cov(const TransmitCovariance& r, const ChannelRealization& ch) {
    if (r.r.rows() != ch.array.m_t || r.r.cols() != ch.array.m_t)
        throw ValidationError("covariance dimension disagrees with M_t");
}

// Real quadratic form a^T Phi G R G^H Phi^H a^* expressed through the
// effective response: equals Re(p^H R^T p).
double quad_rt(const MatC& r, const VecC& p) {
    return std::real(p.dot(r.transpose() * p));
}

cd cross_rt(const MatC& r, const VecC& p, const VecC& q) {
    return p.dot(r.transpose() * q);
}

struct FisherParts {
    double a = 0;      // p_t^H R^T p_t
    cd b = 0;          // p_t^H R^T dp_t
    double c = 0;      // dp_t^H R^T dp_t
    double beta = 0;   // receive-side derivative power (correlation-corrected)
    double w = 0;      // receive-side power
    double beta_plain = 0;  // receive-side derivative power without correction
};

FisherParts fisher_parts(Arch arch, const TransmitCovariance& r,
                         const EffectiveResponse& er) {
    FisherParts f;
    f.a = quad_rt(r.r, er.p_t);
    f.b = cross_rt(r.r, er.p_t, er.dp_t);
    f.c = quad_rt(r.r, er.dp_t);
    f.w = er.p_r.squaredNorm();
    f.beta_plain = er.dp_r.squaredNorm();
    if (arch == Arch::FullyPassive) {
        const double w = std::max(f.w, 1e-300);
        f.beta = f.beta_plain - std::norm(er.p_r.dot(er.dp_r)) / w;
    } else {
        f.beta = f.beta_plain;  // sensor steering has no pattern dependence
    }
    return f;
}

double denominator_exact(const FisherParts& f) {
    if (f.a <= 0) return 0.0;
    const double schur = std::max(f.c - std::norm(f.b) / f.a, 0.0);
    const double d = f.a * f.beta + f.w * schur;
    // Rank-one geometry cancels both correction terms exactly and only a
    // floating-point residue survives; once that residue sits this far
    // below the uncancelled scale the value carries no information, so
    // treat the bound as unbounded rather than astronomically large.
    const double scale = f.a * f.beta_plain + f.w * f.c;
    if (d <= 1e-10 * scale) return 0.0;
    return d;
}

double denominator_approx(const FisherParts& f) {
    return f.a * f.beta_plain + f.w * f.c;
}

double crb_from_denominator(double d, const ChannelRealization& ch,
                            const SensingSpec& spec) {
    if (!(d > kUnboundedThreshold))
        throw NumericalError("Fisher denominator below the estimability threshold");
    const double pref = spec.sigma2 / (2.0 * spec.t_symbols * std::norm(ch.alpha));
    return pref / d;
}

// Regularized lower incomplete gamma P(s, x) = Poisson(x) CDF at s-1.
// Series for x < s+1, continued fraction otherwise.
double gamma_p(double s, double x) {
    if (x <= 0) return 0.0;
    const double lg = std::lgamma(s);
    if (x < s + 1.0) {
        double term = 1.0 / s, sum = term;
        for (int k = 1; k < 10000; ++k) {
            term *= x / (s + k);
            sum += term;
            if (term < sum * 1e-17) break;
        }
        return sum * std::exp(-x + s * std::log(x) - lg);
    }
    // Lentz continued fraction for Q(s, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - s, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return 1.0 - std::exp(-x + s * std::log(x) - lg) * h;
}

}  // namespace

EffectiveResponse effective_response(Arch arch, const ReflectPattern& v,
                                     const ChannelRealization& ch) {
    check_dims(v, ch);
    const int n = ch.array.n;
    const VecC a = steering_irs(ch.theta, n, ch.array);
    const VecC da = steering_derivative(ch.theta, n, ch.array);
    const VecC u = a.cwiseProduct(v.v);
    const VecC ud = da.cwiseProduct(v.v);
    EffectiveResponse er;
    er.p_t = ch.g_t.transpose() * u;
    er.dp_t = ch.g_t.transpose() * ud;
    if (arch == Arch::FullyPassive) {
        er.p_r = ch.g_r * u;
        er.dp_r = ch.g_r * ud;
    } else {
        er.p_r = steering_irs(ch.theta, ch.array.m_r, ch.array);
        er.dp_r = steering_derivative(ch.theta, ch.array.m_r, ch.array);
    }
    return er;
}

double snr(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
           const ChannelRealization& ch, const SensingSpec& spec) {
    check_dims(v, ch);
    check_cov(r, ch);
    spec.validate();
    const EffectiveResponse er = effective_response(arch, v, ch);
    const double tx = std::max(quad_rt(r.r, er.p_t), 0.0);
    const double rx = er.p_r.squaredNorm();
    return std::norm(ch.alpha) * rx * tx / spec.sigma2;
}

TransmitCovariance mrt_covariance(const ReflectPattern& v,
                                  const ChannelRealization& ch, double p0) {
    check_dims(v, ch);
    if (p0 <= 0) throw ValidationError("power budget must be positive");
    const EffectiveResponse er = effective_response(Arch::FullyPassive, v, ch);
    const double nrm2 = er.p_t.squaredNorm();
    if (nrm2 <= 1e-300)
        throw NumericalError("effective transmit channel vanishes; MRT undefined");
    // w w^H with w = conj(p_t) maximizes Re(p^H R^T p) under tr(R) <= p0.
    const VecC w = er.p_t.conjugate();
    TransmitCovariance out;
    out.r = (p0 / nrm2) * (w * w.adjoint());
    out.power_budget = p0;
    return out;
}

double crb(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
           const ChannelRealization& ch, const SensingSpec& spec) {
    check_dims(v, ch);
    check_cov(r, ch);
    spec.validate();
    const EffectiveResponse er = effective_response(arch, v, ch);
    const FisherParts f = fisher_parts(arch, r, er);
    return crb_from_denominator(denominator_exact(f), ch, spec);
}

double crb_approx(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
                  const ChannelRealization& ch, const SensingSpec& spec) {
    check_dims(v, ch);
    check_cov(r, ch);
    spec.validate();
    const EffectiveResponse er = effective_response(arch, v, ch);
    const FisherParts f = fisher_parts(arch, r, er);
    return crb_from_denominator(denominator_approx(f), ch, spec);
}

double marcum_q1(double a, double b) {
    if (a < 0 || b < 0) throw ValidationError("marcum_q1 arguments must be nonnegative");
    if (b == 0) return 1.0;
    const double x = 0.5 * a * a;  // Poisson mixing rate
    const double y = 0.5 * b * b;
    if (x == 0) return std::exp(-y);
    // With the two Poisson means separated by 40+ standard deviations the
    // mixture saturates beyond double precision; skip the series walk.
    if (std::sqrt(x) - std::sqrt(y) > 40.0) return 1.0;
    if (std::sqrt(y) - std::sqrt(x) > 40.0) return 0.0;
    // Q1 = sum_k Pois(k; x) * P(Poisson(y) <= k). Walk k across the window
    // where Pois(k; x) carries mass; the tail outside is below 1e-14.
    const double half = 40.0 * std::sqrt(x) + 20.0;
    const long k_lo = std::max(0L, static_cast<long>(std::floor(x - half)));
    const long k_hi = static_cast<long>(std::ceil(x + half));
    // Poisson(y) CDF at k_lo via the regularized incomplete gamma.
    double cdf = gamma_p(static_cast<double>(k_lo) + 1.0, y);
    cdf = 1.0 - cdf;  // P(Poisson(y) <= k) = Q(k+1, y) = 1 - P(k+1, y)
    double pois = std::exp(k_lo * std::log(x) - x - std::lgamma(k_lo + 1.0));
    double pois_y = std::exp((k_lo + 1) * std::log(y) - y - std::lgamma(k_lo + 2.0));
    double q = 0.0;
    for (long k = k_lo; k <= k_hi; ++k) {
        q += pois * cdf;
        pois *= x / (k + 1.0);
        cdf += pois_y;
        pois_y *= y / (k + 2.0);
    }
    return std::min(1.0, std::max(0.0, q));
}

double detection_probability(Arch arch, const TransmitCovariance& r,
                             const ReflectPattern& v, const ChannelRealization& ch,
                             const SensingSpec& spec) {
    const double s = snr(arch, r, v, ch, spec);
    const double a = std::sqrt(2.0 * spec.t_symbols * s);
    const double b = std::sqrt(2.0 * std::log(1.0 / spec.p_fa));
    return marcum_q1(a, b);
}

MatR fisher_numeric(Arch arch, const TransmitCovariance& r, const ReflectPattern& v,
                    const ChannelRealization& ch, const SensingSpec& spec,
                    double fd_step) {
    check_dims(v, ch);
    check_cov(r, ch);
    if (fd_step <= 0) throw ValidationError("fd_step must be positive");
    // Mean map mu = alpha * M(theta) * X with sum_t x_t x_t^H = T R. The
    // information reduces to trace identities against R; only dM/dtheta is
    // taken numerically.
    const auto response_at = [&](double theta) -> MatC {
        const VecC a = steering_irs(theta, ch.array.n, ch.array);
        const VecC u = a.cwiseProduct(v.v);
        const VecC left = (arch == Arch::FullyPassive)
                              ? VecC(ch.g_r * u)
                              : VecC(steering_irs(theta, ch.array.m_r, ch.array));
        const VecC right = ch.g_t.transpose() * u;  // row factor a^T Phi G_t
        return left * right.transpose();
    };
    const MatC m0 = response_at(ch.theta);
    const MatC md = (response_at(ch.theta + fd_step) - response_at(ch.theta - fd_step))
                    / (2.0 * fd_step);
    const double scale = 2.0 * spec.t_symbols / spec.sigma2;
    const cd al = ch.alpha;
    const auto pair = [&](const MatC& x, const MatC& y) -> cd {
        return (x.adjoint() * y * r.r).trace();
    };
    MatR f(3, 3);
    const cd dd = pair(md, md), dm = pair(md, m0), mm = pair(m0, m0);
    f(0, 0) = scale * std::real(std::norm(al) * dd);
    f(0, 1) = scale * std::real(std::conj(al) * dm);
    f(0, 2) = scale * std::real(std::conj(al) * dm * cd(0, 1));
    f(1, 1) = scale * std::real(mm);
    f(1, 2) = scale * std::real(mm * cd(0, 1));
    f(2, 2) = scale * std::real(mm);
    f(1, 0) = f(0, 1);
    f(2, 0) = f(0, 2);
    f(2, 1) = f(1, 2);
    return f;
}

}  // namespace irs
