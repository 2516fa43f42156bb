#include "dtaoi/mat_geom.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "dtaoi/errors.hpp"

namespace dtaoi {

namespace {

double clamp_probability(double v)
{
    if (v < 0.0) {
        if (v < -kNegativityTolerance) {
            std::ostringstream msg;
            msg << "matrix-geometric pmf value " << v << " is negative beyond tolerance";
            throw NumericalError(msg.str());
        }
        return 0.0;
    }
    return v;
}

} // namespace

MatGeom::MatGeom(RowVector c, Matrix a, Vector b, double d)
    : c_(std::move(c)), a_(std::move(a)), b_(std::move(b)), d_(d)
{
    const auto m = a_.rows();
    lu_.compute(Matrix::Identity(m, m) - a_);
    const Matrix lhs_t = (Matrix::Identity(m, m) - a_).transpose();
    w_ = Eigen::PartialPivLU<Matrix>(lhs_t).solve(c_.transpose()).transpose();
}

MatGeom MatGeom::make(RowVector c, Matrix a, Vector b, double d)
{
    const auto m = a.rows();
    if (m < 1 || a.cols() != m || c.size() != m || b.size() != m)
        throw NumericalError("matrix-geometric law: inconsistent dimensions");
    if (!a.allFinite() || !c.allFinite() || !b.allFinite() || !std::isfinite(d))
        throw NumericalError("matrix-geometric law: non-finite parameters");
    if (d < -kNegativityTolerance || d > 1.0 + kMassTolerance)
        throw NumericalError("matrix-geometric law: d outside [0, 1]");
    const double rho = spectral_radius(a);
    if (!(rho < 1.0)) {
        std::ostringstream msg;
        msg << "matrix-geometric law: spectral radius " << rho << " is not below one";
        throw NumericalError(msg.str());
    }

    MatGeom mg(std::move(c), std::move(a), std::move(b), d < 0.0 ? 0.0 : d);

    const double mass = mg.total_mass();
    if (std::abs(mass - 1.0) > kMassTolerance) {
        std::ostringstream msg;
        msg << "matrix-geometric law: total mass " << mass << " differs from one";
        throw NumericalError(msg.str());
    }
    Vector u = mg.b_;
    for (int ell = 1; ell <= 2 * static_cast<int>(m) + 1; ++ell) {
        clamp_probability(mg.c_.dot(u));
        u = mg.a_ * u;
    }
    return mg;
}

MatGeom MatGeom::point_mass_at_zero()
{
    return make(RowVector::Zero(1), Matrix::Zero(1, 1), Vector::Zero(1), 1.0);
}

MatGeom MatGeom::geometric(double q)
{
    if (!(q > 0.0 && q <= 1.0))
        throw NumericalError("geometric law needs q in (0, 1]");
    return make(RowVector::Constant(1, q), Matrix::Constant(1, 1, 1.0 - q),
                Vector::Ones(1), 0.0);
}

double MatGeom::total_mass() const
{
    return d_ + w_.dot(b_);
}

Vector MatGeom::solve_resolvent(const Vector& v) const
{
    return lu_.solve(v);
}

double pmf_at(const MatGeom& mg, std::uint64_t ell)
{
    if (ell == 0)
        return mg.d();
    return clamp_probability(mg.c().dot(power_times(mg.a(), ell - 1, mg.b())));
}

double tail_at(const MatGeom& mg, std::uint64_t ell)
{
    const double t = mg.tail_weights().dot(power_times(mg.a(), ell, mg.b()));
    return t < 0.0 ? 0.0 : t;
}

double cdf_at(const MatGeom& mg, std::uint64_t ell)
{
    const Vector partial = mg.b() - power_times(mg.a(), ell, mg.b());
    const double v = mg.d() + mg.tail_weights().dot(partial);
    return std::clamp(v, 0.0, 1.0);
}

double pgf_at(const MatGeom& mg, double z)
{
    if (!(z >= 0.0 && z <= 1.0))
        throw InvalidInput("pgf argument must lie in [0, 1]");
    if (z == 0.0)
        return mg.d();
    // c (z^-1 I - A)^-1 b = z c (I - z A)^-1 b
    const auto m = mg.order();
    Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(m, m) - z * mg.a());
    if (lu.rcond() < 1e-14)
        throw SingularError("pgf resolvent is numerically singular");
    return mg.d() + z * mg.c().dot(lu.solve(mg.b()));
}

double factorial_moment(const MatGeom& mg, int i)
{
    if (i < 1)
        throw InvalidInput("factorial moment order must be >= 1");
    Vector v = power_times(mg.a(), static_cast<std::uint64_t>(i - 1), mg.b());
    for (int k = 0; k <= i; ++k)
        v = mg.solve_resolvent(v);
    double factorial = 1.0;
    for (int k = 2; k <= i; ++k)
        factorial *= k;
    return factorial * mg.c().dot(v);
}

double mean(const MatGeom& mg)
{
    return factorial_moment(mg, 1);
}

double variance(const MatGeom& mg)
{
    const double m1 = factorial_moment(mg, 1);
    return factorial_moment(mg, 2) + m1 - m1 * m1;
}

std::vector<double> truncate_pmf(const MatGeom& mg, double tail_eps, std::size_t cap)
{
    if (!(tail_eps > 0.0 && tail_eps < 1.0))
        throw InvalidInput("tail_eps must lie in (0, 1)");

    std::vector<double> out{mg.d()};
    // u holds A^ell b; Pr{X > ell} = w u, Pr{X = ell + 1} = c u.
    Vector u = mg.b();
    std::size_t ell = 0;
    while (mg.tail_weights().dot(u) >= tail_eps) {
        if (ell >= cap)
            throw IterationCapError("pmf truncation exceeded the iteration cap");
        out.push_back(clamp_probability(mg.c().dot(u)));
        u = mg.a() * u;
        ++ell;
    }
    return out;
}

} // namespace dtaoi
