#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dtaoi/linalg.hpp"

namespace dtaoi {

// Pmf values in [-kNegativityTolerance, 0) are rounding noise and read as 0.
inline constexpr double kNegativityTolerance = 1e-12;
// |total mass - 1| allowed for a constructed law.
inline constexpr double kMassTolerance = 1e-9;
inline constexpr std::size_t kDefaultTruncationCap = 1'000'000;

/// Discrete matrix-geometric law MG(c, A, b, d):
///
///     Pr{X = 0} = d,    Pr{X = l} = c A^(l-1) b   for l >= 1.
///
/// Instances are immutable and validated on construction (sp(A) < 1,
/// d in [0,1], unit total mass, no materially negative pmf values in the
/// first few terms). The LU factorization of (I - A) is cached; moments
/// and tails are computed by solves against it, never by inversion.
class MatGeom {
public:
    /// Throws NumericalError if the arguments do not describe a probability law.
    static MatGeom make(RowVector c, Matrix a, Vector b, double d);

    static MatGeom point_mass_at_zero();
    /// pmf(l) = q (1-q)^(l-1), l >= 1.
    static MatGeom geometric(double q);

    const RowVector& c() const { return c_; }
    const Matrix& a() const { return a_; }
    const Vector& b() const { return b_; }
    double d() const { return d_; }
    int order() const { return static_cast<int>(a_.rows()); }

    /// d + c (I-A)^(-1) b.
    double total_mass() const;
    /// c (I-A)^(-1), cached.
    const RowVector& tail_weights() const { return w_; }
    /// Solves (I - A) x = v.
    Vector solve_resolvent(const Vector& v) const;

private:
    MatGeom(RowVector c, Matrix a, Vector b, double d);

    RowVector c_;
    Matrix a_;
    Vector b_;
    double d_;
    Eigen::PartialPivLU<Matrix> lu_;
    RowVector w_;
};

double pmf_at(const MatGeom& mg, std::uint64_t ell);

/// Pr{X <= ell} from the closed-form partial sum d + c (I-A)^(-1) (I - A^ell) b.
double cdf_at(const MatGeom& mg, std::uint64_t ell);

/// Pr{X > ell} = c (I-A)^(-1) A^ell b, accurate in the far tail.
double tail_at(const MatGeom& mg, std::uint64_t ell);

/// E[z^X] for z in [0, 1].
double pgf_at(const MatGeom& mg, double z);

/// E[X (X-1) ... (X-i+1)] = i! c (I-A)^(-i-1) A^(i-1) b, i >= 1.
double factorial_moment(const MatGeom& mg, int i);

double mean(const MatGeom& mg);
double variance(const MatGeom& mg);

/// pmf values for l = 0..L, L the first index with Pr{X > L} < tail_eps.
/// Throws IterationCapError if L would exceed `cap`.
std::vector<double> truncate_pmf(const MatGeom& mg, double tail_eps,
                                 std::size_t cap = kDefaultTruncationCap);

} // namespace dtaoi
