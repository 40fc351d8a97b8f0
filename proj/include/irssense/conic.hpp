#pragma once
/// Dense semidefinite programming by operator splitting (ADMM): alternating
/// projection onto the affine constraint set and the PSD cone with scaled
/// dual updates and over-relaxation. Complex Hermitian problems are solved
/// through the standard real embedding.
#include <optional>
#include <utility>
#include <vector>

#include "irssense/types.hpp"

namespace irs {

struct SdpProblem {
    int n = 1;                                        ///< matrix dimension
    MatR C;                                           ///< symmetric cost
    std::vector<std::pair<MatR, double>> eq_constraints;    ///< <A,X> = b
    std::vector<std::pair<MatR, double>> ineq_constraints;  ///< <A,X> <= b
    bool maximize = false;
};

enum class SdpStatus { Optimal, MaxIterations, Infeasible };

struct SdpSolution {
    MatR X;
    double objective = 0;
    SdpStatus status = SdpStatus::MaxIterations;
    double primal_residual = 0;
    double dual_residual = 0;
    double min_eigenvalue = 0;
    int iterations = 0;
};

struct SdpOptions {
    double tol = 1e-7;
    int max_iter = 20000;
    double relax = 1.6;   ///< over-relaxation parameter
};

/// Opaque warm-start state; reusing it across solves of structurally
/// identical problems (successive linearizations) cuts iterations sharply.
struct SdpState {
    MatR X, Z, U;
    double rho = 1.0;
    bool valid = false;
};

/// [[Re H, -Im H],[Im H, Re H]]; eigenvalues of H each appear twice.
MatR embed_hermitian(const MatC& h);

/// Inverse of embed_hermitian (averages the redundant blocks).
MatC unembed_hermitian(const MatR& x);

/// Frobenius-nearest PSD matrix: eigendecompose, clip negatives.
MatR project_psd(const MatR& s);

/// Solve min/max <C,X> subject to the problem's constraints and X PSD.
/// Inequalities are handled with nonnegative slack entries appended on the
/// diagonal (product-cone projection), so callers only ever see X.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opts = {},
                      SdpState* state = nullptr);

}  // namespace irs
