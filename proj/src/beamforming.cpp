#include "irssense/beamforming.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <tuple>
#include <utility>

#include <Eigen/Eigenvalues>

#include "irssense/channel.hpp"
#include "irssense/conic.hpp"
#include "irssense/metrics.hpp"
#include "irssense/rng.hpp"

namespace irs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kPhaseGridSize = 64;
constexpr int kBlendPoints = 41;

const std::array<cd, kPhaseGridSize>& phase_grid() {
    static const std::array<cd, kPhaseGridSize> grid = [] {
        std::array<cd, kPhaseGridSize> g{};
        for (int k = 0; k < kPhaseGridSize; ++k)
            g[k] = std::polar(1.0, 2.0 * M_PI * k / kPhaseGridSize);
        return g;
    }();
    return grid;
}

void check_geom(const ChannelRealization& ch, const ArrayGeometry& geom) {
    if (geom.n != ch.array.n || geom.m_t != ch.array.m_t || geom.m_r != ch.array.m_r ||
        geom.spacing != ch.array.spacing || geom.wavelength != ch.array.wavelength)
        throw ValidationError("geometry disagrees with the channel draw");
}

double quad(const MatC& q, const VecC& v) { return std::real(v.dot(q * v)); }

VecC phase_of(const VecC& z) {
    VecC v(z.size());
    for (int k = 0; k < z.size(); ++k) {
        const double m = std::abs(z(k));
        v(k) = m > 0 ? cd(z(k) / m) : cd(1, 0);
    }
    return v;
}

std::vector<int> coordinate_order(int n, std::uint64_t seed) {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    Crng rng(seed);
    for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[rng.raw() % static_cast<std::uint64_t>(i + 1)]);
    return order;
}

/// q_ij = conj(s_i) inner_ij s_j, the lifted form of |inner^(1/2) diag(s) v|^2.
MatC scale_lift(const MatC& inner, const VecC& s) {
    const VecC sc = s.conjugate();
    return sc.asDiagonal() * inner * s.asDiagonal();
}

// ---------------------------------------------------------------------------
// SNR pattern objective
// ---------------------------------------------------------------------------

struct SnrForms {
    MatC r1;          ///< receive-side lifted form (fully-passive only)
    MatC r2;          ///< transmit-side lifted form
    double rx_fixed;  ///< fixed receive gain M_r (semi-passive), else 1
    bool fully;

    double value(const VecC& v) const {
        const double tx = quad(r2, v);
        return fully ? quad(r1, v) * tx : rx_fixed * tx;
    }
};

SnrForms snr_forms(Arch arch, const ChannelRealization& ch, const VecC& a) {
    SnrForms f;
    f.fully = arch == Arch::FullyPassive;
    f.rx_fixed = f.fully ? 1.0 : static_cast<double>(ch.array.m_r);
    f.r2 = scale_lift(ch.g_t.conjugate() * ch.g_t.transpose(), a);
    if (f.fully) f.r1 = scale_lift(ch.g_r.adjoint() * ch.g_r, a);
    return f;
}

/// Stationary phases of (a1 + 2 Re(conj(e) z1)) (a2 + 2 Re(conj(e) z2)) on
/// the unit circle: with c1 = a1 conj(z2) + a2 conj(z1), c2 = conj(z1 z2),
/// they are the unit-modulus roots of 2 c2 t^4 + c1 t^3 - conj(c1) t
/// - 2 conj(c2). Returns the candidate count written into out.
int product_critical_phases(double a1, cd z1, double a2, cd z2,
                            std::array<cd, 5>& out) {
    const cd c1 = a1 * std::conj(z2) + a2 * std::conj(z1);
    const cd c2 = std::conj(z1 * z2);
    const double s1 = std::abs(c1), s2 = std::abs(c2);
    int m = 0;
    if (s2 <= 1e-14 * std::max(1.0, s1)) {
        if (s1 > 0) out[m++] = std::conj(c1) / s1;
        return m;
    }
    const cd lead = 2.0 * c2;
    Eigen::Matrix4cd comp = Eigen::Matrix4cd::Zero();
    comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
    comp(0, 3) = std::conj(c2) / c2;         // -a0, a0 = -conj(c2)/c2
    comp(1, 3) = std::conj(c1) / lead;       // -a1, a1 = -conj(c1)/(2 c2)
    comp(3, 3) = -c1 / lead;                 // -a3
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(comp, false);
    for (int k = 0; k < 4; ++k) {
        const cd t = es.eigenvalues()(k);
        const double mag = std::abs(t);
        if (std::abs(mag - 1.0) < 1e-3 && mag > 0) out[m++] = t / mag;
    }
    if (s1 > 0) out[m++] = std::conj(c1) / s1;  // safety net if roots drifted
    return m;
}

/// One full cyclic sweep of exact per-coordinate updates. Returns the number
/// of accepted moves. cur1/cur2 track v^H R_i v incrementally.
int snr_ascent_sweep(const SnrForms& f, VecC& v, VecC& w1, VecC& w2,
                     double& cur1, double& cur2) {
    const int n = static_cast<int>(v.size());
    int accepted = 0;
    for (int i = 0; i < n; ++i) {
        const cd e0 = v(i);
        const cd z2 = w2(i) - f.r2(i, i) * e0;
        const double a2 = cur2 - 2.0 * std::real(std::conj(e0) * z2);
        if (!f.fully) {
            const double m2 = std::abs(z2);
            if (m2 <= 0) continue;
            const cd en = z2 / m2;
            const double cand = a2 + 2.0 * m2;
            if (cand > cur2) {
                w2 += f.r2.col(i) * (en - e0);
                v(i) = en;
                cur2 = cand;
                ++accepted;
            }
            continue;
        }
        const cd z1 = w1(i) - f.r1(i, i) * e0;
        const double a1 = cur1 - 2.0 * std::real(std::conj(e0) * z1);
        std::array<cd, 5> cands{};
        const int m = product_critical_phases(a1, z1, a2, z2, cands);
        cd best_e = e0;
        double best_f1 = cur1, best_f2 = cur2, best_val = cur1 * cur2;
        for (int k = 0; k < m; ++k) {
            const cd e = cands[k];
            const double f1 = a1 + 2.0 * std::real(std::conj(e) * z1);
            const double f2 = a2 + 2.0 * std::real(std::conj(e) * z2);
            if (f1 * f2 > best_val) {
                best_val = f1 * f2;
                best_f1 = f1;
                best_f2 = f2;
                best_e = e;
            }
        }
        if (best_e != e0) {
            w1 += f.r1.col(i) * (best_e - e0);
            w2 += f.r2.col(i) * (best_e - e0);
            v(i) = best_e;
            cur1 = best_f1;
            cur2 = best_f2;
            ++accepted;
        }
    }
    return accepted;
}

/// Lifted unit-diagonal relaxation max tr(Q V), diag(V) = 1, V psd, through
/// the real embedding. Returns tr(Q V_hat) and the Hermitian iterate.
struct LiftSolution {
    MatC v_hat;
    double objective = 0;
    SdpStatus status = SdpStatus::MaxIterations;
};

LiftSolution solve_unit_diag(const MatC& q, double tol) {
    const int n = static_cast<int>(q.rows());
    SdpProblem prob;
    prob.n = 2 * n;
    prob.maximize = true;
    prob.C = embed_hermitian(q);
    for (int i = 0; i < n; ++i) {
        MatR ai = MatR::Zero(2 * n, 2 * n);
        ai(i, i) = 1.0;
        ai(n + i, n + i) = 1.0;
        prob.eq_constraints.emplace_back(std::move(ai), 2.0);
    }
    SdpOptions so;
    so.tol = tol;
    const SdpSolution sol = solve_sdp(prob, so);
    LiftSolution out;
    out.v_hat = unembed_hermitian(sol.X);
    out.objective = sol.objective / 2.0;  // embedding doubles the inner product
    out.status = sol.status;
    return out;
}

/// Gaussian randomization from a PSD factor of v_hat; candidates are scored
/// by `score` (higher is better) against the provided baseline.
template <typename Score>
VecC randomize_best(const MatC& v_hat, const VecC& baseline, int samples,
                    Crng& rng, Score score) {
    Eigen::SelfAdjointEigenSolver<MatC> es(v_hat);
    const VecR evals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const MatC l = es.eigenvectors() * evals.asDiagonal();
    const int n = static_cast<int>(v_hat.rows());
    VecC best = baseline;
    double best_val = score(baseline);
    const VecC lead = phase_of(es.eigenvectors().col(n - 1));
    const double lead_val = score(lead);
    if (lead_val > best_val) {
        best = lead;
        best_val = lead_val;
    }
    VecC g(n);
    for (int s = 0; s < samples; ++s) {
        for (int k = 0; k < n; ++k) g(k) = rng.cgaussian();
        const VecC cand = phase_of(l * g);
        const double val = score(cand);
        if (val > best_val) {
            best = cand;
            best_val = val;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Exact-bound machinery shared by minimize_crb and transmit_only_design
// ---------------------------------------------------------------------------

struct CrbProblem {
    Arch arch;
    const ChannelRealization* ch;
    const SensingSpec* spec;
    double p0;
    VecC a, da;          ///< surface steering and derivative at the draw angle
    double bb = 0;       ///< ||db||^2 of the sensor array (semi-passive)
    double wsem = 0;     ///< ||b||^2 = M_r (semi-passive)

    bool semi() const { return arch == Arch::SemiPassive; }
};

CrbProblem make_crb_problem(Arch arch, const ChannelRealization& ch,
                            const SensingSpec& spec, double p0) {
    CrbProblem pb;
    pb.arch = arch;
    pb.ch = &ch;
    pb.spec = &spec;
    pb.p0 = p0;
    pb.a = steering_irs(ch.theta, ch.array.n, ch.array);
    pb.da = steering_derivative(ch.theta, ch.array.n, ch.array);
    if (arch == Arch::SemiPassive) {
        const VecC b = steering_irs(ch.theta, ch.array.m_r, ch.array);
        const VecC db = steering_derivative(ch.theta, ch.array.m_r, ch.array);
        pb.bb = db.squaredNorm();
        pb.wsem = b.squaredNorm();
    }
    return pb;
}

double crb_or_inf(const CrbProblem& pb, const VecC& v, const MatC& r) {
    try {
        return crb(pb.arch, TransmitCovariance{r, pb.p0}, ReflectPattern{v},
                   *pb.ch, *pb.spec);
    } catch (const NumericalError&) {
        return kInf;
    }
}

double denom_value(bool semi, double np2t, double ndp2t, cd ipt, double np2r,
                   double ndp2r, cd ipr, double bb, double wsem) {
    if (np2t <= 0) return 0.0;
    double beta, w;
    if (semi) {
        beta = bb;
        w = wsem;
    } else {
        beta = ndp2r - std::norm(ipr) / std::max(np2r, 1e-300);
        w = np2r;
    }
    const double schur = std::max(ndp2t - std::norm(ipt) / np2t, 0.0);
    return np2t * beta + w * schur;
}

/// Coordinate ascent on the exact Fisher denominator with the covariance
/// fixed. Every functional is affine in the single phase being updated, so
/// one coordinate costs a handful of small inner products plus the grid.
VecC exact_phi_ascent(const CrbProblem& pb, const MatC& r, VecC v, int sweeps,
                      const std::vector<int>& order) {
    const bool semi = pb.semi();
    const MatC& gt = pb.ch->g_t;
    const MatC& gr = pb.ch->g_r;
    const MatC rt = r.transpose();
    const auto& grid = phase_grid();

    VecC ut = pb.a.cwiseProduct(v), udt = pb.da.cwiseProduct(v);
    VecC pt = gt.transpose() * ut, dpt = gt.transpose() * udt;
    VecC rpt = rt * pt, rdpt = rt * dpt;
    VecC pr, dpr;
    if (!semi) {
        pr = gr * ut;
        dpr = gr * udt;
    }
    auto exact_current = [&]() {
        return denom_value(semi, std::real(pt.dot(rpt)), std::real(dpt.dot(rdpt)),
                           pt.dot(rdpt), semi ? 0.0 : pr.squaredNorm(),
                           semi ? 0.0 : dpr.squaredNorm(),
                           semi ? cd(0) : cd(pr.dot(dpr)), pb.bb, pb.wsem);
    };
    double cur = exact_current();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        const double prev = cur;
        for (const int idx : order) {
            const cd e0 = v(idx);
            const VecC wt = pb.a(idx) * gt.row(idx).transpose();
            const VecC wdt = pb.da(idx) * gt.row(idx).transpose();
            const VecC rwt = rt * wt, rwdt = rt * wdt;
            const VecC pt0 = pt - e0 * wt, dpt0 = dpt - e0 * wdt;
            const VecC rpt0 = rpt - e0 * rwt, rdpt0 = rdpt - e0 * rwdt;
            const double t_const = std::real(pt0.dot(rpt0)) + std::real(wt.dot(rwt));
            const cd t_lin = pt0.dot(rwt);
            const double dt_const =
                std::real(dpt0.dot(rdpt0)) + std::real(wdt.dot(rwdt));
            const cd dt_lin = dpt0.dot(rwdt);
            const cd i_const = pt0.dot(rdpt0) + wt.dot(rwdt);
            const cd i_e = pt0.dot(rwdt), i_ec = wt.dot(rdpt0);

            VecC wr, wdr, pr0, dpr0;
            double r_const = 0, dr_const = 0;
            cd r_lin, dr_lin, ir_const, ir_e, ir_ec;
            if (!semi) {
                wr = pb.a(idx) * gr.col(idx);
                wdr = pb.da(idx) * gr.col(idx);
                pr0 = pr - e0 * wr;
                dpr0 = dpr - e0 * wdr;
                r_const = pr0.squaredNorm() + wr.squaredNorm();
                r_lin = pr0.dot(wr);
                dr_const = dpr0.squaredNorm() + wdr.squaredNorm();
                dr_lin = dpr0.dot(wdr);
                ir_const = pr0.dot(dpr0) + wr.dot(wdr);
                ir_e = pr0.dot(wdr);
                ir_ec = wr.dot(dpr0);
            }
            cd best_e = e0;
            double best_val = cur;
            for (const cd e : grid) {
                const double np2t = t_const + 2.0 * std::real(e * t_lin);
                const double ndp2t = dt_const + 2.0 * std::real(e * dt_lin);
                const cd ipt = i_const + e * i_e + std::conj(e) * i_ec;
                double np2r = 0, ndp2r = 0;
                cd ipr(0);
                if (!semi) {
                    np2r = r_const + 2.0 * std::real(e * r_lin);
                    ndp2r = dr_const + 2.0 * std::real(e * dr_lin);
                    ipr = ir_const + e * ir_e + std::conj(e) * ir_ec;
                }
                const double d =
                    denom_value(semi, np2t, ndp2t, ipt, np2r, ndp2r, ipr, pb.bb, pb.wsem);
                if (d > best_val) {
                    best_val = d;
                    best_e = e;
                }
            }
            if (best_val > cur) {
                cur = best_val;
                v(idx) = best_e;
                pt = pt0 + best_e * wt;
                dpt = dpt0 + best_e * wdt;
                rpt = rpt0 + best_e * rwt;
                rdpt = rdpt0 + best_e * rwdt;
                if (!semi) {
                    pr = pr0 + best_e * wr;
                    dpr = dpr0 + best_e * wdr;
                }
            }
        }
        // refresh so incremental drift cannot accumulate across sweeps
        ut = pb.a.cwiseProduct(v);
        udt = pb.da.cwiseProduct(v);
        pt = gt.transpose() * ut;
        dpt = gt.transpose() * udt;
        rpt = rt * pt;
        rdpt = rt * dpt;
        if (!semi) {
            pr = gr * ut;
            dpr = gr * udt;
        }
        cur = exact_current();
        if (cur - prev < 1e-9 * std::max(1.0, std::abs(prev))) break;
    }
    return v;
}

/// Covariance step at unit power budget: maximize beta A(R) + w t subject to
/// the Schur block [[C(R) - t, B(R)], [B(R)*, A(R)]] psd and tr(R) <= 1,
/// with A, B, C the quadratic/cross forms of the effective transmit pair.
/// The complex blocks ride in one block-diagonal real embedding; couplings
/// are unconstrained and cost nothing, so the block optimum is unchanged.
std::optional<MatC> crb_rstep_unit(const CrbProblem& pb, const VecC& v, double tol) {
    const int mt = pb.ch->array.m_t;
    const EffectiveResponse er =
        effective_response(pb.arch, ReflectPattern{v}, *pb.ch);
    double beta, w;
    if (pb.semi()) {
        beta = pb.bb;
        w = pb.wsem;
    } else {
        const double nr2 = er.p_r.squaredNorm();
        beta = er.dp_r.squaredNorm() -
               std::norm(er.p_r.dot(er.dp_r)) / std::max(nr2, 1e-300);
        w = nr2;
    }
    const double npt = er.p_t.norm(), ndpt = er.dp_t.norm();
    if (!(npt > 1e-150) || !(ndpt > 1e-150)) return std::nullopt;
    const VecC ph = er.p_t / npt, dph = er.dp_t / ndpt;
    // A' = <conj(ph) ph^T, R>, C' analogous, B' = tr(R conj(ph) dph^T)
    const MatC pa = (ph * ph.adjoint()).conjugate();
    const MatC pc = (dph * dph.adjoint()).conjugate();
    const MatC wm = (ph * dph.adjoint()).conjugate();
    const MatC h1 = (wm + wm.adjoint()) / 2.0;
    const MatC h2 = (wm - wm.adjoint()) / cd(0, 2);

    const int nb = 2 * mt;
    const int dim = nb + 5;  // [embed R][embed S (4)][t]
    const int ti = nb + 4;
    const auto assemble = [&](const MatC* rh,
                              std::initializer_list<std::tuple<int, int, double>> s,
                              double tco) {
        MatR m = MatR::Zero(dim, dim);
        if (rh != nullptr) m.topLeftCorner(nb, nb) = embed_hermitian(*rh);
        for (const auto& [i, j, c] : s) m(nb + i, nb + j) += c;
        m(ti, ti) = tco;
        return m;
    };
    SdpProblem prob;
    prob.n = dim;
    prob.maximize = true;
    const MatC cost_pa = beta * npt * npt * pa;
    prob.C = assemble(&cost_pa, {}, 2.0 * w * ndpt * ndpt);
    // embedding doubles every inner product, hence the uniform factor 2
    prob.eq_constraints.emplace_back(
        assemble(&pc, {{0, 0, -1.0}, {2, 2, -1.0}}, -2.0), 0.0);  // S11 = C' - t
    prob.eq_constraints.emplace_back(
        assemble(&pa, {{1, 1, -1.0}, {3, 3, -1.0}}, 0.0), 0.0);   // S22 = A'
    prob.eq_constraints.emplace_back(
        assemble(&h1, {{1, 0, -0.5}, {0, 1, -0.5}, {3, 2, -0.5}, {2, 3, -0.5}}, 0.0),
        0.0);  // Re S21 = Re B'
    prob.eq_constraints.emplace_back(
        assemble(&h2, {{0, 3, -0.5}, {3, 0, -0.5}, {1, 2, 0.5}, {2, 1, 0.5}}, 0.0),
        0.0);  // Im S21 = Im B'
    MatR tr_mat = MatR::Zero(dim, dim);
    tr_mat.topLeftCorner(nb, nb) = MatR::Identity(nb, nb);
    prob.ineq_constraints.emplace_back(std::move(tr_mat), 2.0);  // tr(R) <= 1
    SdpOptions so;
    so.tol = tol;
    const SdpSolution sol = solve_sdp(prob, so);
    if (sol.status == SdpStatus::Infeasible) return std::nullopt;
    MatC r = unembed_hermitian(sol.X.topLeftCorner(nb, nb));
    Eigen::SelfAdjointEigenSolver<MatC> es(r);
    const VecR evals = es.eigenvalues().cwiseMax(0.0);
    r = es.eigenvectors() * evals.asDiagonal() * es.eigenvectors().adjoint();
    const double tr = evals.sum();
    if (tr > 1.0) r *= 1.0 / tr;
    return r;
}

/// Exact-bound line search over convex blends of two covariances.
std::pair<MatC, double> blend_best(const CrbProblem& pb, const MatC& r0,
                                   const MatC& r1, const VecC& v) {
    MatC best = r0;
    double best_c = kInf;
    for (int k = 0; k < kBlendPoints; ++k) {
        const double lam = static_cast<double>(k) / (kBlendPoints - 1);
        const MatC r = (1.0 - lam) * r0 + lam * r1;
        const double c = crb_or_inf(pb, v, r);
        if (c < best_c) {
            best_c = c;
            best = r;
        }
    }
    return {best, best_c};
}

double lift_trace(const MatC& q, const MatC& y) {
    return std::real((y.conjugate().cwiseProduct(q * y)).sum());
}

/// Block ascent over unit-norm rows of the low-rank factor Y, maximizing
/// tr(Q Y Y^H). The rank exceeds the Barvinok-Pataki bound, so row-wise
/// optima reach the lifted optimum in practice.
void bm_rows(const MatC& q, MatC& y, int sweeps) {
    const int n = static_cast<int>(y.rows());
    const VecR d = q.diagonal().real();
    MatC w = q * y;
    double prev = -kInf;
    for (int s = 0; s < sweeps; ++s) {
        for (int i = 0; i < n; ++i) {
            const Eigen::RowVectorXcd g = w.row(i) - d(i) * y.row(i);
            const double nr = g.norm();
            if (nr > 1e-300) {
                const Eigen::RowVectorXcd yi = g / nr;
                w.noalias() += q.col(i) * (yi - y.row(i));
                y.row(i) = yi;
            }
        }
        const double cur = std::real((y.conjugate().cwiseProduct(w)).sum());
        if (cur - prev < 1e-6 * std::max(1.0, std::abs(prev))) break;
        prev = cur;
    }
}

/// Reference reflection step: SCA on the dominant-term denominator in the
/// lifted variable (kept as a unit-row factor), then Gaussian randomization
/// scored by the exact bound. Returns the incumbent if nothing improves it.
VecC sdr_phi_step(const CrbProblem& pb, const MatC& r, const VecC& v0, Crng& rng,
                  const OptimizerOptions& opts) {
    const int n = static_cast<int>(v0.size());
    const MatC& gt = pb.ch->g_t;
    const MatC rt = r.transpose();
    const MatC base = gt.conjugate() * rt * gt.transpose();
    const MatC qa = scale_lift(base, pb.a);
    const MatC qc = scale_lift(base, pb.da);
    const int rank = std::max(8, static_cast<int>(std::ceil(std::sqrt(2.0 * n))));
    MatC y(n, rank);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < rank; ++k)
            y(i, k) = 0.05 * cd(rng.gaussian(), rng.gaussian());
    y.col(0) += v0;
    for (int i = 0; i < n; ++i) y.row(i) /= std::max(y.row(i).norm(), 1e-300);

    if (pb.semi()) {
        const MatC q = pb.bb * qa + pb.wsem * qc;
        bm_rows(q, y, 60);
    } else {
        const MatC grbase = pb.ch->g_r.adjoint() * pb.ch->g_r;
        const MatC qdr = scale_lift(grbase, pb.da);
        const MatC qr = scale_lift(grbase, pb.a);
        double prev = -kInf;
        for (int it = 0; it < 8; ++it) {
            const double ta = lift_trace(qa, y), tdr = lift_trace(qdr, y);
            const double trr = lift_trace(qr, y), tc = lift_trace(qc, y);
            const double cur = ta * tdr + trr * tc;
            if (cur - prev < 1e-4 * std::max(1.0, std::abs(prev))) break;
            prev = cur;
            const MatC q = tdr * qa + ta * qdr + tc * qr + trr * qc;
            bm_rows(q, y, 30);
        }
    }
    VecC best = v0;
    double best_c = crb_or_inf(pb, v0, r);
    VecC g(rank);
    for (int s = 0; s < opts.randomization_samples; ++s) {
        for (int k = 0; k < rank; ++k) g(k) = rng.cgaussian();
        const VecC cand = phase_of(y * g);
        const double c = crb_or_inf(pb, cand, r);
        if (c < best_c) {
            best_c = c;
            best = cand;
        }
    }
    return best;
}

struct AltRun {
    VecC v;
    MatC r;
    double crb = kInf;
    std::vector<double> trace;
    bool hit_round_cap = false;
};

/// One alternating run from a given starting pattern. Reflection step first;
/// every move is accepted on the exact bound only.
std::optional<AltRun> alternate(const CrbProblem& pb, const VecC& v_init,
                                const OptimizerOptions& opts,
                                const std::vector<int>& order, Crng& rng) {
    const int mt = pb.ch->array.m_t;
    const MatC iso =
        (pb.p0 / mt) * MatC::Identity(mt, mt);
    AltRun run;
    run.v = v_init;
    run.r = iso;
    run.crb = crb_or_inf(pb, run.v, run.r);
    if (!std::isfinite(run.crb)) return std::nullopt;
    run.trace.push_back(run.crb);
    for (int round = 0; round < opts.alt_opt_max_rounds; ++round) {
        const double round_start = run.crb;
        const VecC vv = opts.backend == Backend::CoordinateAscent
                            ? exact_phi_ascent(pb, run.r, run.v, opts.sca_max_iter, order)
                            : sdr_phi_step(pb, run.r, run.v, rng, opts);
        const double c_phi = crb_or_inf(pb, vv, run.r);
        bool improved = false;
        if (c_phi < run.crb) {
            run.v = vv;
            run.crb = c_phi;
            improved = true;
        }
        if (const auto rs = crb_rstep_unit(pb, run.v, opts.inner_sdp_tol)) {
            const auto [rc, c_r] = blend_best(pb, run.r, MatC(pb.p0 * (*rs)), run.v);
            if (c_r < run.crb * (1.0 - opts.sca_rel_tol)) {
                run.r = rc;
                run.crb = c_r;
                improved = true;
            }
        }
        if (!improved) return run;  // stalled: converged at the incumbent
        run.trace.push_back(run.crb);
        if (round_start - run.crb <
            opts.sca_rel_tol * std::max(round_start, 1e-300))
            return run;
    }
    run.hit_round_cap = true;
    return run;
}

}  // namespace

void OptimizerOptions::validate() const {
    if (sca_max_iter < 1 || randomization_samples < 1 || alt_opt_max_rounds < 1)
        throw ValidationError("optimizer iteration counts must be >= 1");
    if (sca_rel_tol <= 0 || inner_sdp_tol <= 0)
        throw ValidationError("optimizer tolerances must be > 0");
}

ReflectPattern los_optimal_phases(double theta, double theta2,
                                  const ArrayGeometry& geom) {
    geom.validate();
    const VecR idx = centered_indices(geom.n);
    const double c = -M_PI * geom.spacing / geom.wavelength *
                     (std::sin(theta) + std::sin(theta2));
    VecC v(geom.n);
    for (int k = 0; k < geom.n; ++k) v(k) = std::polar(1.0, c * idx(k));
    return ReflectPattern{v};
}

ReflectPattern benchmark_pattern(BenchmarkKind kind, int n, std::uint64_t seed) {
    if (n < 1) throw ValidationError("pattern size must be >= 1");
    VecC v(n);
    if (kind == BenchmarkKind::Identity) {
        v.setOnes();
    } else {
        Crng rng(derive_seed(seed, static_cast<std::uint64_t>(n), 0, 23));
        for (int k = 0; k < n; ++k) v(k) = std::polar(1.0, rng.uniform_phase());
    }
    return ReflectPattern{v};
}

ReflectPattern appendix_aligned_pattern(AlignKind kind, const MatC& g_hat, int col,
                                        double theta, const ArrayGeometry& geom) {
    geom.validate();
    if (g_hat.rows() != geom.n)
        throw ValidationError("g_hat row count must equal the surface size");
    if (col < 0 || col >= g_hat.cols())
        throw ValidationError("aligned-pattern column index out of range");
    const VecC a = steering_irs(theta, geom.n, geom);
    VecC v(geom.n);
    switch (kind) {
        case AlignKind::AlignColumn:
            for (int k = 0; k < geom.n; ++k)
                v(k) = std::polar(1.0, -(std::arg(g_hat(k, col)) + std::arg(a(k))));
            break;
        case AlignKind::SplitAlign: {
            const int half = geom.n / 2;
            for (int k = 0; k < geom.n; ++k) {
                const double g_phase = k < half ? 0.0 : std::arg(g_hat(k, col));
                v(k) = std::polar(1.0, -(g_phase + std::arg(a(k))));
            }
            break;
        }
        case AlignKind::DerivativeAlign: {
            const VecC da = steering_derivative(theta, geom.n, geom);
            for (int k = 0; k < geom.n; ++k) {
                const cd ref = std::abs(da(k)) > 1e-12 ? da(k) : a(k);
                v(k) = std::polar(1.0, -(std::arg(g_hat(k, col)) + std::arg(ref)));
            }
            break;
        }
    }
    return ReflectPattern{v};
}

BeamformingResult maximize_snr(Arch arch, const ChannelRealization& ch, double theta,
                               const ArrayGeometry& geom,
                               const OptimizerOptions& opts) {
    geom.validate();
    opts.validate();
    check_geom(ch, geom);
    const VecC a = steering_irs(theta, geom.n, geom);
    const SnrForms f = snr_forms(arch, ch, a);
    if (f.r2.norm() <= 0 || (f.fully && f.r1.norm() <= 0))
        throw ValidationError("degenerate channel: a link matrix is zero");

    const VecC v0 = appendix_aligned_pattern(AlignKind::AlignColumn, ch.g_t, 0,
                                             theta, geom)
                        .v;
    BeamformingResult res;
    if (opts.backend == Backend::CoordinateAscent) {
        const auto ascend = [&](const VecC& init) {
            BeamformingResult run;
            VecC v = init;
            VecC w2 = f.r2 * v, w1;
            double cur2 = std::real(v.dot(w2)), cur1 = 1.0;
            if (f.fully) {
                w1 = f.r1 * v;
                cur1 = std::real(v.dot(w1));
            }
            run.objective_trace.push_back(f.value(v));
            run.status = SolveStatus::IterationLimit;
            for (int sweep = 0; sweep < opts.sca_max_iter; ++sweep) {
                snr_ascent_sweep(f, v, w1, w2, cur1, cur2);
                // recompute exactly before recording a milestone
                w2 = f.r2 * v;
                cur2 = std::real(v.dot(w2));
                if (f.fully) {
                    w1 = f.r1 * v;
                    cur1 = std::real(v.dot(w1));
                }
                const double exact = f.value(v);
                const double prev = run.objective_trace.back();
                if (exact <=
                    prev + opts.sca_rel_tol * std::max(1.0, std::abs(prev))) {
                    if (exact > prev) run.objective_trace.push_back(exact);
                    run.status = SolveStatus::Converged;
                    break;
                }
                run.objective_trace.push_back(exact);
            }
            run.v = ReflectPattern{v};
            return run;
        };
        // The per-coordinate updates are exact but local. Restart from the
        // aligned construction, from the phase projection of the leading
        // eigenvector of the relaxation matrix (the basin the lifted solve
        // converges to), and from seeded random phases; keep the best run.
        std::vector<VecC> inits = {v0};
        {
            Eigen::SelfAdjointEigenSolver<MatC> es(f.fully ? MatC(f.r1 + f.r2)
                                                           : f.r2);
            const VecC lead = es.eigenvectors().col(geom.n - 1);
            VecC vs(geom.n);
            for (int k = 0; k < geom.n; ++k)
                vs(k) = std::abs(lead(k)) > 1e-12
                            ? cd(std::polar(1.0, std::arg(lead(k))))
                            : cd(1.0, 0.0);
            inits.push_back(vs);
        }
        for (std::uint64_t k = 0; k < 2; ++k)
            inits.push_back(benchmark_pattern(BenchmarkKind::RandomPhases, geom.n,
                                              derive_seed(opts.seed, geom.n, k, 11))
                                .v);
        for (const VecC& init : inits) {
            BeamformingResult run = ascend(init);
            if (res.objective_trace.empty() ||
                run.objective_trace.back() > res.objective_trace.back())
                res = std::move(run);
        }
        return res;
    }

    // SdrSca. For the product objective the linearized-square surrogate has
    // a maximizer independent of the expansion point (a positive scalar
    // times tr((R1 + R2) V)), so one lifted solve realizes the SCA fixed
    // point; the semi-passive objective is already linear in V.
    const MatC q = f.fully ? MatC(f.r1 + f.r2) : f.r2;
    const LiftSolution lift = solve_unit_diag(q, opts.inner_sdp_tol);
    if (lift.status == SdpStatus::Infeasible) {
        res.v = ReflectPattern{v0};
        res.objective_trace.push_back(f.value(v0));
        res.status = SolveStatus::Failed;
        return res;
    }
    Crng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(geom.n), 0, 19));
    const VecC v = randomize_best(lift.v_hat, v0, opts.randomization_samples, rng,
                                  [&](const VecC& cand) { return f.value(cand); });
    res.v = ReflectPattern{v};
    res.objective_trace.push_back(f.value(v0));
    res.objective_trace.push_back(f.value(v));
    // The relaxation dominates every unit-modulus pattern; a feasible lift
    // of the returned pattern tightens the bound estimate from below.
    if (f.fully) {
        const double s = std::max(lift.objective, quad(f.r1, v) + quad(f.r2, v));
        res.relaxation_bound = 0.25 * s * s;
    } else {
        res.relaxation_bound =
            f.rx_fixed * std::max(lift.objective, quad(f.r2, v));
    }
    res.status = lift.status == SdpStatus::Optimal ? SolveStatus::Converged
                                                   : SolveStatus::IterationLimit;
    return res;
}

BeamformingResult minimize_crb(Arch arch, const ChannelRealization& ch,
                               const ArrayGeometry& geom, const SensingSpec& spec,
                               double p0, const OptimizerOptions& opts) {
    geom.validate();
    opts.validate();
    spec.validate();
    check_geom(ch, geom);
    if (p0 <= 0) throw ValidationError("power budget must be > 0");
    const CrbProblem pb = make_crb_problem(arch, ch, spec, p0);
    const int mt = geom.m_t;
    const MatC iso = (p0 / mt) * MatC::Identity(mt, mt);

    const VecC v_align =
        appendix_aligned_pattern(AlignKind::AlignColumn, ch.g_t, 0, ch.theta, geom).v;
    if (!std::isfinite(crb_or_inf(pb, v_align, iso)))
        throw NumericalError(
            "estimation bound is unbounded at initialization; increase the "
            "surface size N or the transmit covariance rank");

    std::vector<VecC> inits = {v_align};
    if (opts.backend == Backend::CoordinateAscent) {
        inits.push_back(appendix_aligned_pattern(AlignKind::DerivativeAlign, ch.g_t,
                                                 0, ch.theta, geom)
                            .v);
        if (geom.n <= 48)
            for (std::uint64_t k = 0; k < 2; ++k)
                inits.push_back(
                    benchmark_pattern(BenchmarkKind::RandomPhases, geom.n,
                                      derive_seed(opts.seed, geom.n, k, 11))
                        .v);
    }
    const std::vector<int> order =
        coordinate_order(geom.n, derive_seed(opts.seed, geom.n, 0, 13));
    Crng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(geom.n), 0, 17));

    std::optional<AltRun> best;
    for (const VecC& vi : inits) {
        const auto run = alternate(pb, vi, opts, order, rng);
        if (run && (!best || run->crb < best->crb)) best = run;
    }
    // v_align was checked feasible above, so at least that run succeeded
    BeamformingResult res;
    res.v = ReflectPattern{best->v};
    res.r = TransmitCovariance{best->r, p0};
    res.objective_trace = best->trace;
    res.status = best->hit_round_cap ? SolveStatus::IterationLimit
                                     : SolveStatus::Converged;
    return res;
}

BeamformingResult minimize_crb_reflective(Arch arch, const ChannelRealization& ch,
                                          const ArrayGeometry& geom,
                                          const SensingSpec& spec,
                                          const TransmitCovariance& r_fixed,
                                          const OptimizerOptions& opts) {
    geom.validate();
    opts.validate();
    spec.validate();
    check_geom(ch, geom);
    if (r_fixed.r.rows() != geom.m_t || r_fixed.r.cols() != geom.m_t)
        throw ValidationError("fixed covariance size must match the transmit array");
    if (r_fixed.power_budget <= 0) throw ValidationError("power budget must be > 0");
    const CrbProblem pb = make_crb_problem(arch, ch, spec, r_fixed.power_budget);

    const VecC v_align =
        appendix_aligned_pattern(AlignKind::AlignColumn, ch.g_t, 0, ch.theta, geom).v;
    if (!std::isfinite(crb_or_inf(pb, v_align, r_fixed.r)))
        throw NumericalError(
            "estimation bound is unbounded at initialization; increase the "
            "surface size N or the transmit covariance rank");

    std::vector<VecC> inits = {v_align};
    if (opts.backend == Backend::CoordinateAscent) {
        inits.push_back(appendix_aligned_pattern(AlignKind::DerivativeAlign, ch.g_t,
                                                 0, ch.theta, geom)
                            .v);
        if (geom.n <= 48)
            for (std::uint64_t k = 0; k < 2; ++k)
                inits.push_back(
                    benchmark_pattern(BenchmarkKind::RandomPhases, geom.n,
                                      derive_seed(opts.seed, geom.n, k, 11))
                        .v);
    }
    const std::vector<int> order =
        coordinate_order(geom.n, derive_seed(opts.seed, geom.n, 0, 13));
    Crng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(geom.n), 0, 17));

    VecC v_best = v_align;
    double c_best = kInf;
    std::vector<double> trace;
    bool hit_cap = false;
    for (const VecC& vi : inits) {
        VecC v = vi;
        double c = crb_or_inf(pb, v, r_fixed.r);
        if (!std::isfinite(c)) continue;
        std::vector<double> tr = {c};
        bool cap = false;
        for (int round = 0; round < opts.alt_opt_max_rounds; ++round) {
            const double round_start = c;
            const VecC vv =
                opts.backend == Backend::CoordinateAscent
                    ? exact_phi_ascent(pb, r_fixed.r, v, opts.sca_max_iter, order)
                    : sdr_phi_step(pb, r_fixed.r, v, rng, opts);
            const double c_phi = crb_or_inf(pb, vv, r_fixed.r);
            if (c_phi >= c) break;  // stalled: converged at the incumbent
            v = vv;
            c = c_phi;
            tr.push_back(c);
            if (round_start - c < opts.sca_rel_tol * std::max(round_start, 1e-300))
                break;
            if (round + 1 == opts.alt_opt_max_rounds) cap = true;
        }
        if (c < c_best) {
            v_best = v;
            c_best = c;
            trace = tr;
            hit_cap = cap;
        }
    }
    BeamformingResult res;
    res.v = ReflectPattern{v_best};
    res.r = r_fixed;
    res.objective_trace = trace;
    res.status = hit_cap ? SolveStatus::IterationLimit : SolveStatus::Converged;
    return res;
}

TransmitCovariance transmit_only_design(Arch arch, const ChannelRealization& ch,
                                        const ReflectPattern& v_fixed,
                                        DesignObjective objective, double p0,
                                        const SensingSpec& spec,
                                        const OptimizerOptions& opts) {
    opts.validate();
    spec.validate();
    if (p0 <= 0) throw ValidationError("power budget must be > 0");
    if (v_fixed.size() != ch.array.n)
        throw ValidationError("pattern/channel dimension mismatch");
    if (objective == DesignObjective::Snr) return mrt_covariance(v_fixed, ch, p0);

    const CrbProblem pb = make_crb_problem(arch, ch, spec, p0);
    const MatC iso = (p0 / ch.array.m_t) * MatC::Identity(ch.array.m_t, ch.array.m_t);
    const auto rs = crb_rstep_unit(pb, v_fixed.v, opts.inner_sdp_tol);
    if (!rs) {
        if (!std::isfinite(crb_or_inf(pb, v_fixed.v, iso)))
            throw NumericalError("estimation bound unbounded for the fixed pattern");
        return TransmitCovariance{iso, p0};
    }
    const auto [r, c] = blend_best(pb, iso, MatC(p0 * (*rs)), v_fixed.v);
    if (!std::isfinite(c))
        throw NumericalError("estimation bound unbounded for the fixed pattern");
    return TransmitCovariance{r, p0};
}

}  // namespace irs
