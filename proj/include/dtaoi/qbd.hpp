#pragma once

#include <string>
#include <vector>

#include "dtaoi/linalg.hpp"
#include "dtaoi/mat_geom.hpp"

namespace dtaoi {

/// Infinite level-independent discrete-time QBD with transition matrix
///
///     | B0 A0          |
///     | B1 A1 A0       |
///     |    A2 A1 A0    |
///     |       ...      |
///
/// A0 raises the level by one, A2 (B1 from level 1) lowers it, A1 and B0
/// keep it. All blocks are m x m.
struct QbdChain {
    Matrix B0;
    Matrix B1;
    Matrix A0;
    Matrix A1;
    Matrix A2;

    int phases() const { return static_cast<int>(A0.rows()); }
};

inline constexpr double kRowSumTolerance = 1e-12;

/// Returns the chain unchanged if every block is m x m with entries in [0, 1]
/// and the rows of B0+A0, B1+A1+A0, A2+A1+A0 sum to one. Throws
/// StructureError naming the offending block and (1-based) row otherwise.
QbdChain validate_chain(QbdChain chain);

struct SolverOptions {
    double tol = 1e-12;
    int max_iter = 100'000;
};

struct RateMatrix {
    Matrix R;
    double residual = 0.0;  // max |A0 + R A1 + R^2 A2 - R|
    double spectral_radius = 0.0;
    int iterations = 0;
    std::string method;  // "logarithmic-reduction" or "fixed-point"
};

/// Minimal nonnegative solution of R = A0 + R A1 + R^2 A2.
///
/// Logarithmic reduction computes G (first passage to the level below),
/// then R = A0 (I - A1 - A0 G)^(-1). If that fails or leaves a residual
/// above `tol`, the natural fixed-point iteration from R = 0 is run.
/// Throws ConvergenceError after `max_iter` fixed-point steps and
/// InstabilityError if sp(R) >= 1 - 1e-9.
RateMatrix solve_rate_matrix(const QbdChain& chain, double tol = 1e-12,
                             int max_iter = 100'000);

/// One step R -> A0 + R A1 + R^2 A2 of the natural iteration.
Matrix fixed_point_step(const QbdChain& chain, const Matrix& R);

struct BoundaryVector {
    RowVector pi0;
    double residual = 0.0;  // max of |pi0 (B0 + R B1) - pi0| and |pi0 (I-R)^-1 1 - 1|
};

/// pi0 = pi0 (B0 + R B1), pi0 (I - R)^(-1) 1 = 1, via an SVD null-space
/// check of (B0 + R B1 - I)^T and a least-squares solve with the
/// normalization row appended. Throws AmbiguousBoundaryError when the
/// second-smallest singular value is <= 1e-8.
BoundaryVector solve_boundary(const QbdChain& chain, const Matrix& R);

struct QbdSolution {
    Matrix R;
    RowVector pi0;
    double residual_R = 0.0;
    double residual_pi0 = 0.0;
    double spectral_radius = 0.0;
    int iterations = 0;
    std::string method;
    double tol = 0.0;
};

/// Validates, solves for R and pi0, and packages the diagnostics.
QbdSolution solve(const QbdChain& chain, const SolverOptions& options = {});

/// Law of the stationary level: MG(pi0 R, R, 1, pi0 1).
MatGeom level_distribution(const QbdSolution& sol);

/// Law of the stationary level conditioned on the phase lying in
/// `phase_set` (1-based indices): MG(a pi0 R, R, h, a pi0 h) with h the
/// indicator of the set and a = 1 / (pi0 (I-R)^(-1) h). Throws
/// ZeroMassError if the set carries no stationary mass.
MatGeom restricted_level_distribution(const QbdSolution& sol,
                                      const std::vector<int>& phase_set);

/// Max-abs residual of pi = pi P over levels 0..levels-1, with
/// pi_k = pi0 R^k (levels beyond are the geometric continuation).
double stationary_residual(const QbdSolution& sol, const QbdChain& chain, int levels);

} // namespace dtaoi
