#include "irssense/conic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace irs {
namespace {

MatR symmetrize(const MatR& s) { return (s + s.transpose()) / 2.0; }

double fnorm(const MatR& m) { return m.norm(); }

/// Flattened constraint system <A_i, X> = b_i over the extended (slack-
/// augmented) variable, pre-factorized for repeated affine projections.
struct AffineSet {
    std::vector<MatR> a;
    VecR b;
    MatR gram_pinv;

    void build() {
        const int m = static_cast<int>(a.size());
        MatR gram(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = i; j < m; ++j) {
                const double g = (a[i].array() * a[j].array()).sum();
                gram(i, j) = g;
                gram(j, i) = g;
            }
        Eigen::SelfAdjointEigenSolver<MatR> es(gram);
        VecR w = es.eigenvalues();
        const double cut = std::max(w.maxCoeff(), 1.0) * 1e-12;
        VecR winv = VecR::Zero(m);
        for (int i = 0; i < m; ++i)
            if (w(i) > cut) winv(i) = 1.0 / w(i);
        gram_pinv = es.eigenvectors() * winv.asDiagonal() * es.eigenvectors().transpose();
    }

    MatR project(const MatR& w) const {
        const int m = static_cast<int>(a.size());
        VecR r(m);
        for (int i = 0; i < m; ++i) r(i) = (a[i].array() * w.array()).sum() - b(i);
        const VecR mu = gram_pinv * r;
        MatR out = w;
        for (int i = 0; i < m; ++i) out.noalias() -= mu(i) * a[i];
        return out;
    }
};

/// Projection onto PSD(n) x R+^k: PSD-project the leading block, clip the
/// slack diagonal, zero the couplings.
MatR project_cone(const MatR& s, int n, int k) {
    if (k == 0) return project_psd(s);
    MatR out = MatR::Zero(n + k, n + k);
    out.topLeftCorner(n, n) = project_psd(symmetrize(s.topLeftCorner(n, n)));
    for (int j = 0; j < k; ++j) out(n + j, n + j) = std::max(s(n + j, n + j), 0.0);
    return out;
}

}  // namespace

MatR embed_hermitian(const MatC& h) {
    const int n = static_cast<int>(h.rows());
    if (h.cols() != n) throw ValidationError("embed_hermitian: matrix must be square");
    if ((h - h.adjoint()).norm() > 1e-12 * std::max(1.0, h.norm()))
        throw ValidationError("embed_hermitian: input is not Hermitian");
    MatR e(2 * n, 2 * n);
    e.topLeftCorner(n, n) = h.real();
    e.topRightCorner(n, n) = -h.imag();
    e.bottomLeftCorner(n, n) = h.imag();
    e.bottomRightCorner(n, n) = h.real();
    return e;
}

MatC unembed_hermitian(const MatR& x) {
    const int n = static_cast<int>(x.rows()) / 2;
    if (x.rows() != 2 * n || x.cols() != 2 * n)
        throw ValidationError("unembed_hermitian: dimension must be even and square");
    MatC h = (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n)) / 2.0 +
             cd(0, 1) * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n)) / 2.0;
    return (h + h.adjoint()) / 2.0;
}

MatR project_psd(const MatR& s) {
    if (s.rows() != s.cols()) throw ValidationError("project_psd: matrix must be square");
    Eigen::SelfAdjointEigenSolver<MatR> es(symmetrize(s));
    VecR w = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts, SdpState* state) {
    if (p.n < 1) throw ValidationError("solve_sdp: n must be >= 1");
    if (p.C.rows() != p.n || p.C.cols() != p.n)
        throw ValidationError("solve_sdp: cost dimension mismatch");
    if (opts.tol <= 0) throw ValidationError("solve_sdp: tol must be > 0");
    const int n = p.n;
    const int k = static_cast<int>(p.ineq_constraints.size());
    const int d = n + k;

    // Extended symmetric cost; slack entries carry zero cost.
    MatR c = MatR::Zero(d, d);
    c.topLeftCorner(n, n) = symmetrize(p.maximize ? MatR(-p.C) : p.C);
    const double cscale = std::max(fnorm(c), 1e-12);
    c /= cscale;

    AffineSet aff;
    aff.b.resize(static_cast<int>(p.eq_constraints.size()) + k);
    int row = 0;
    for (const auto& [ai, bi] : p.eq_constraints) {
        if (ai.rows() != n || ai.cols() != n)
            throw ValidationError("solve_sdp: equality constraint dimension mismatch");
        MatR ext = MatR::Zero(d, d);
        ext.topLeftCorner(n, n) = symmetrize(ai);
        const double s = std::max(fnorm(ext), 1e-12);
        aff.a.push_back(ext / s);
        aff.b(row++) = bi / s;
    }
    for (int j = 0; j < k; ++j) {
        const auto& [aj, bj] = p.ineq_constraints[j];
        if (aj.rows() != n || aj.cols() != n)
            throw ValidationError("solve_sdp: inequality constraint dimension mismatch");
        MatR ext = MatR::Zero(d, d);
        ext.topLeftCorner(n, n) = symmetrize(aj);
        ext(n + j, n + j) = 1.0;  // <A,X> + s_j = b
        const double s = std::max(fnorm(ext), 1e-12);
        aff.a.push_back(ext / s);
        aff.b(row++) = bj / s;
    }
    aff.build();

    MatR x = MatR::Zero(d, d), z = MatR::Zero(d, d), u = MatR::Zero(d, d);
    double rho = 1.0;
    if (state != nullptr && state->valid && state->Z.rows() == d) {
        x = state->X;
        z = state->Z;
        u = state->U;
        rho = state->rho;
    }

    SdpSolution sol;
    double rp = 0, rd = 0;
    double window_best = std::numeric_limits<double>::infinity();
    bool diverging = false;
    int it = 0;
    for (it = 1; it <= opts.max_iter; ++it) {
        x = aff.project(z - u - c / rho);
        const MatR y = opts.relax * x + (1.0 - opts.relax) * z;
        const MatR zn = project_cone(y + u, n, k);
        u += y - zn;
        rp = fnorm(x - zn);
        rd = rho * fnorm(zn - z);
        z = zn;
        const double sc = std::max({1.0, fnorm(x), fnorm(z)});
        if (rp <= opts.tol * sc && rd <= opts.tol * std::max(1.0, rho * fnorm(u))) break;
        if (it % 50 == 0) {  // residual balancing keeps the scaled dual honest
            if (rp > 10 * rd) {
                rho = std::min(rho * 2, 1e4);
                u /= 2;
            } else if (rd > 10 * rp) {
                rho = std::max(rho / 2, 1e-4);
                u *= 2;
            }
        }
        if (it % 500 == 0) {  // divergence guardrail, not a certificate
            if (rp > 1e4 * window_best && rp > 1.0) {
                diverging = true;
                break;
            }
            window_best = std::min(window_best, rp);
        }
    }

    if (state != nullptr) {
        state->X = x;
        state->Z = z;
        state->U = u;
        state->rho = rho;
        state->valid = true;
    }

    sol.X = z.topLeftCorner(n, n);
    sol.objective = (p.C.array() * sol.X.array()).sum();
    sol.primal_residual = rp;
    sol.dual_residual = rd;
    sol.iterations = it;
    Eigen::SelfAdjointEigenSolver<MatR> es(sol.X);
    sol.min_eigenvalue = es.eigenvalues().minCoeff();
    const double sc = std::max({1.0, fnorm(x), fnorm(z)});
    if (diverging)
        sol.status = SdpStatus::Infeasible;
    else if (rp <= opts.tol * sc && rd <= opts.tol * std::max(1.0, rho * fnorm(u)))
        sol.status = SdpStatus::Optimal;
    else
        sol.status = SdpStatus::MaxIterations;
    return sol;
}

}  // namespace irs
