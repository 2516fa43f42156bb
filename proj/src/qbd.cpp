#include "dtaoi/qbd.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "dtaoi/errors.hpp"

namespace dtaoi {

namespace {

constexpr int kMaxReductionSteps = 64;
constexpr int kPolishSteps = 20;
constexpr double kInstabilityMargin = 1e-9;
constexpr double kSimpleEigenvalueGap = 1e-8;
constexpr double kZeroMass = 1e-14;

void check_block(const Matrix& block, const char* name, int m)
{
    if (block.rows() != m || block.cols() != m) {
        std::ostringstream msg;
        msg << "QBD structure: block " << name << " is " << block.rows() << "x"
            << block.cols() << ", expected " << m << "x" << m;
        throw StructureError(msg.str());
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double v = block(i, j);
            if (!std::isfinite(v) || v < -kRowSumTolerance || v > 1.0 + kRowSumTolerance) {
                std::ostringstream msg;
                msg << "QBD structure: " << name << " row " << i + 1 << " entry " << j + 1
                    << " = " << v << " is not a probability";
                throw StructureError(msg.str());
            }
        }
    }
}

void check_rows(const Matrix& sum, const char* name)
{
    for (int i = 0; i < sum.rows(); ++i) {
        const double s = sum.row(i).sum();
        if (std::abs(s - 1.0) > kRowSumTolerance) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "QBD structure: row " << i + 1 << " of " << name << " sums to " << s;
            throw StructureError(msg.str());
        }
    }
}

double quadratic_residual(const QbdChain& chain, const Matrix& R)
{
    return max_abs(fixed_point_step(chain, R) - R);
}

// Right-multiplication by an inverse: X * M^-1.
Matrix right_solve(const Matrix& x, const Matrix& m)
{
    const Matrix mt = m.transpose();
    Eigen::PartialPivLU<Matrix> lu(mt);
    if (lu.rcond() < 1e-15)
        throw SingularError("singular matrix in rate-matrix solve");
    return lu.solve(x.transpose()).transpose();
}

// Latouche-Ramaswami logarithmic reduction. Returns R, or an empty matrix
// when the reduction breaks down.
Matrix logarithmic_reduction(const QbdChain& chain, double tol, int& steps)
{
    const int m = chain.phases();
    const Matrix I = Matrix::Identity(m, m);
    const Vector ones = Vector::Ones(m);

    Eigen::PartialPivLU<Matrix> local(I - chain.A1);
    if (local.rcond() < 1e-15)
        return {};
    Matrix up = local.solve(chain.A0);
    Matrix down = local.solve(chain.A2);
    Matrix G = down;
    Matrix T = up;

    steps = 0;
    bool converged = false;
    while (steps < kMaxReductionSteps) {
        ++steps;
        const Matrix U = up * down + down * up;
        Eigen::PartialPivLU<Matrix> lu(I - U);
        if (lu.rcond() < 1e-15 || !U.allFinite())
            return {};
        up = lu.solve(Matrix(up * up));
        down = lu.solve(Matrix(down * down));
        G += T * down;
        T = T * up;
        if ((ones - G * ones).cwiseAbs().maxCoeff() < tol || max_abs(T) < tol) {
            converged = true;
            break;
        }
    }
    if (!converged || !G.allFinite())
        return {};
    try {
        return right_solve(chain.A0, I - chain.A1 - chain.A0 * G);
    } catch (const SingularError&) {
        return {};
    }
}

// Traditional iteration R <- A0 (I - A1 - R A2)^-1, used to polish the
// reduction output down to the requested residual.
Matrix polish(const QbdChain& chain, Matrix R, double tol, int& steps)
{
    const int m = chain.phases();
    const Matrix I = Matrix::Identity(m, m);
    for (int k = 0; k < kPolishSteps && quadratic_residual(chain, R) > tol; ++k) {
        R = right_solve(chain.A0, I - chain.A1 - R * chain.A2);
        ++steps;
    }
    return R;
}

Matrix nonnegative(Matrix R)
{
    if (R.size() > 0 && R.minCoeff() < -1e-12)
        throw NumericalError("rate matrix has materially negative entries");
    return R.cwiseMax(0.0);
}

} // namespace

QbdChain validate_chain(QbdChain chain)
{
    const int m = static_cast<int>(chain.A0.rows());
    if (m < 1)
        throw StructureError("QBD structure: no phases");
    check_block(chain.B0, "B0", m);
    check_block(chain.B1, "B1", m);
    check_block(chain.A0, "A0", m);
    check_block(chain.A1, "A1", m);
    check_block(chain.A2, "A2", m);
    check_rows(chain.B0 + chain.A0, "B0+A0");
    check_rows(chain.B1 + chain.A1 + chain.A0, "B1+A1+A0");
    check_rows(chain.A2 + chain.A1 + chain.A0, "A2+A1+A0");
    return chain;
}

Matrix fixed_point_step(const QbdChain& chain, const Matrix& R)
{
    return chain.A0 + R * chain.A1 + R * R * chain.A2;
}

RateMatrix solve_rate_matrix(const QbdChain& chain, double tol, int max_iter)
{
    if (!(tol > 0.0))
        throw InvalidInput("rate-matrix tolerance must be positive");
    if (max_iter < 1)
        throw InvalidInput("rate-matrix iteration cap must be positive");

    const int m = chain.phases();
    RateMatrix out;

    int steps = 0;
    Matrix R = logarithmic_reduction(chain, tol, steps);
    if (R.size() > 0 && R.allFinite()) {
        try {
            R = polish(chain, nonnegative(std::move(R)), tol, steps);
            R = nonnegative(std::move(R));
            out.residual = quadratic_residual(chain, R);
            if (out.residual <= tol) {
                out.R = std::move(R);
                out.iterations = steps;
                out.method = "logarithmic-reduction";
            }
        } catch (const NumericalError&) {
            // fall through to the fixed-point iteration
        }
    }

    if (out.method.empty()) {
        R = Matrix::Zero(m, m);
        int k = 0;
        double change = 0.0;
        do {
            if (k >= max_iter) {
                std::ostringstream msg;
                msg << "rate matrix did not converge in " << max_iter
                    << " fixed-point iterations (last change " << change << ")";
                throw ConvergenceError(msg.str());
            }
            Matrix next = fixed_point_step(chain, R);
            change = max_abs(next - R);
            R = std::move(next);
            ++k;
        } while (change > tol);
        out.R = nonnegative(std::move(R));
        out.residual = quadratic_residual(chain, out.R);
        out.iterations = k;
        out.method = "fixed-point";
    }

    out.spectral_radius = spectral_radius(out.R);
    if (!(out.spectral_radius < 1.0 - kInstabilityMargin)) {
        std::ostringstream msg;
        msg << "rate matrix spectral radius " << out.spectral_radius
            << " is not below one: the chain is not positive recurrent";
        throw InstabilityError(msg.str());
    }
    return out;
}

BoundaryVector solve_boundary(const QbdChain& chain, const Matrix& R)
{
    const int m = chain.phases();
    const Matrix I = Matrix::Identity(m, m);
    const Matrix K = (chain.B0 + R * chain.B1 - I).transpose();

    Eigen::JacobiSVD<Matrix> svd(K);
    const Vector& sv = svd.singularValues();  // descending
    if (m >= 2 && sv(m - 2) <= kSimpleEigenvalueGap) {
        std::ostringstream msg;
        msg << "boundary eigenvalue one is not simple (second-smallest singular value "
            << sv(m - 2) << ")";
        throw AmbiguousBoundaryError(msg.str());
    }

    Eigen::PartialPivLU<Matrix> resolvent(I - R);
    const Vector v = resolvent.solve(Vector::Ones(m));

    Matrix system(m + 1, m);
    system.topRows(m) = K;
    system.row(m) = v.transpose();
    Vector rhs = Vector::Zero(m + 1);
    rhs(m) = 1.0;
    Vector x = system.colPivHouseholderQr().solve(rhs);

    if (!x.allFinite() || x.minCoeff() < -1e-12)
        throw NumericalError("boundary vector has materially negative entries");

    BoundaryVector out;
    out.pi0 = x.cwiseMax(0.0).transpose();
    const RowVector balance = out.pi0 * (chain.B0 + R * chain.B1) - out.pi0;
    out.residual = std::max(balance.cwiseAbs().maxCoeff(), std::abs(out.pi0.dot(v) - 1.0));
    return out;
}

QbdSolution solve(const QbdChain& chain, const SolverOptions& options)
{
    const QbdChain checked = validate_chain(chain);
    RateMatrix rate = solve_rate_matrix(checked, options.tol, options.max_iter);
    BoundaryVector boundary = solve_boundary(checked, rate.R);

    QbdSolution sol;
    sol.R = std::move(rate.R);
    sol.pi0 = std::move(boundary.pi0);
    sol.residual_R = rate.residual;
    sol.residual_pi0 = boundary.residual;
    sol.spectral_radius = rate.spectral_radius;
    sol.iterations = rate.iterations;
    sol.method = std::move(rate.method);
    sol.tol = options.tol;
    return sol;
}

MatGeom level_distribution(const QbdSolution& sol)
{
    const auto m = sol.R.rows();
    return MatGeom::make(sol.pi0 * sol.R, sol.R, Vector::Ones(m), sol.pi0.sum());
}

MatGeom restricted_level_distribution(const QbdSolution& sol,
                                      const std::vector<int>& phase_set)
{
    const int m = static_cast<int>(sol.R.rows());
    if (phase_set.empty())
        throw InvalidInput("phase set is empty");
    std::set<int> seen;
    Vector h = Vector::Zero(m);
    for (int phase : phase_set) {
        if (phase < 1 || phase > m) {
            std::ostringstream msg;
            msg << "phase " << phase << " outside 1.." << m;
            throw InvalidInput(msg.str());
        }
        if (!seen.insert(phase).second)
            throw InvalidInput("phase set has duplicates");
        h(phase - 1) = 1.0;
    }

    const Vector y = Eigen::PartialPivLU<Matrix>(Matrix::Identity(m, m) - sol.R).solve(h);
    const double mass = sol.pi0.dot(y);
    if (!(mass > kZeroMass))
        throw ZeroMassError("phase subset carries no stationary mass");
    const double alpha = 1.0 / mass;
    return MatGeom::make(alpha * sol.pi0 * sol.R, sol.R, h, alpha * sol.pi0.dot(h));
}

double stationary_residual(const QbdSolution& sol, const QbdChain& chain, int levels)
{
    if (levels < 2)
        throw InvalidInput("stationary residual needs at least two levels");
    std::vector<RowVector> pi;
    pi.reserve(static_cast<std::size_t>(levels) + 1);
    pi.push_back(sol.pi0);
    for (int k = 1; k <= levels; ++k)
        pi.push_back(pi.back() * sol.R);

    double worst = (pi[0] - (pi[0] * chain.B0 + pi[1] * chain.B1)).cwiseAbs().maxCoeff();
    for (int k = 1; k < levels; ++k) {
        const RowVector rhs = pi[k - 1] * chain.A0 + pi[k] * chain.A1 + pi[k + 1] * chain.A2;
        worst = std::max(worst, (pi[k] - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
}

} // namespace dtaoi
