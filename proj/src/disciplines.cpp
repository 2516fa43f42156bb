#include "dtaoi/disciplines.hpp"

#include <algorithm>
#include <cmath>

#include "dtaoi/errors.hpp"

namespace dtaoi {

namespace {

// 1-based element access matching the phase tables.
struct Block {
    Matrix& m;
    double& operator()(int i, int j) { return m(i - 1, j - 1); }
};

void check_inputs(const Gammas& g, double q)
{
    if (!(q > 0.0 && q <= 1.0))
        throw InvalidInput("service probability q must lie in (0, 1]");
    if (!(g.gamma1 > 0.0))
        throw InvalidInput("tagged source is never selected (gamma1 = 0)");
}

QbdChain bufferless_frame()
{
    QbdChain c;
    c.A0 = Matrix::Zero(5, 5);
    c.A1 = Matrix::Zero(5, 5);
    c.A2 = Matrix::Zero(5, 5);
    c.B0 = Matrix::Zero(5, 5);
    c.B1 = Matrix::Zero(5, 5);
    c.A2(4, 4) = 1.0;
    c.B1(4, 4) = 1.0;
    c.B0(4, 0) = 1.0;
    return c;
}

} // namespace

QbdChain build_npb(const Gammas& g, double q)
{
    check_inputs(g, q);
    const double qb = 1.0 - q;
    QbdChain c = bufferless_frame();
    Block a0{c.A0};

    a0(1, 1) = qb;
    a0(1, 2) = q * g.gamma0;
    a0(1, 3) = q * g.gamma1;
    a0(1, 4) = q * g.gamma2;

    a0(2, 2) = g.gamma0;
    a0(2, 3) = g.gamma1;
    a0(2, 4) = g.gamma2;

    a0(3, 3) = qb;
    a0(3, 5) = q;

    a0(4, 2) = q * g.gamma0;
    a0(4, 3) = q * g.gamma1;
    a0(4, 4) = qb + q * g.gamma2;

    return validate_chain(std::move(c));
}

QbdChain build_pb(const Gammas& g, double q)
{
    check_inputs(g, q);
    const double qb = 1.0 - q;
    QbdChain c = bufferless_frame();
    Block a0{c.A0};

    a0(1, 1) = qb * g.gamma0;
    a0(1, 2) = q * g.gamma0;
    a0(1, 3) = q * g.gamma1;
    a0(1, 4) = q * g.gamma2;
    a0(1, 5) = qb * g.gamma12;

    a0(2, 2) = g.gamma0;
    a0(2, 3) = g.gamma1;
    a0(2, 4) = g.gamma2;

    a0(3, 3) = qb * g.gamma01;
    a0(3, 4) = qb * g.gamma2;
    a0(3, 5) = q;

    a0(4, 2) = q * g.gamma0;
    a0(4, 3) = g.gamma1;
    a0(4, 4) = qb * g.gamma02 + q * g.gamma2;

    return validate_chain(std::move(c));
}

NpsbrWaitParams npsbr_wait_params(const Gammas& g, double q, double p_tagged)
{
    check_inputs(g, q);
    if (!(p_tagged > 0.0 && p_tagged <= 1.0))
        throw InvalidInput("tagged arrival probability must lie in (0, 1]");
    const double qb = 1.0 - q;
    const double g0 = g.gamma0;
    const double g12 = g.gamma12;

    // Occupancy chain (0, 1 or 2 packets in the system).
    Eigen::Matrix3d Q;
    Q << g0, 1.0 - g0, 0.0,
         q * g0, q * g12 + qb * g0, qb * g12,
         0.0, q, qb;

    // x (Q - I) = 0 with the last balance equation replaced by x 1 = 1.
    Eigen::Matrix3d system = (Q - Eigen::Matrix3d::Identity()).transpose();
    system.row(2).setOnes();
    Eigen::FullPivLU<Eigen::Matrix3d> lu(system);
    if (lu.rank() < 3)
        throw SingularError("occupancy chain has no unique stationary vector");
    const Eigen::Vector3d xv = lu.solve(Eigen::Vector3d(0.0, 0.0, 1.0));

    NpsbrWaitParams w;
    for (int i = 0; i < 3; ++i)
        w.x[static_cast<std::size_t>(i)] = std::max(0.0, xv(i));
    const double x0 = w.x[0];
    const double x1 = w.x[1];
    const double x2 = w.x[2];

    w.gamma = g.gamma1 / p_tagged;
    w.r = g0 * q / (1.0 - g0 + g0 * q);
    const double straight_in = w.gamma * (x0 + x1 * q + x2 * q);
    const double via_buffer = w.gamma * w.r * (x1 * qb + x2 * qb);
    w.p_s = straight_in + via_buffer;
    if (!(w.p_s > 0.0))
        throw SingularError("tagged packets never succeed");
    w.a = std::min(1.0, straight_in / w.p_s);
    w.b = 1.0 - g0 * qb;
    return w;
}

double npsbr_wait_pmf(const NpsbrWaitParams& w, std::uint64_t ell)
{
    if (ell == 0)
        return w.a;
    return (1.0 - w.a) * w.b * std::pow(1.0 - w.b, static_cast<double>(ell - 1));
}

QbdChain build_npsbr(const Gammas& g, double q, const NpsbrWaitParams& wait)
{
    check_inputs(g, q);
    const double qb = 1.0 - q;
    const double g0 = g.gamma0;
    const double g1 = g.gamma1;
    const double g2 = g.gamma2;
    const double g01 = g.gamma01;
    const double g02 = g.gamma02;

    QbdChain c;
    c.A0 = Matrix::Zero(10, 10);
    c.A1 = Matrix::Zero(10, 10);
    c.A2 = Matrix::Zero(10, 10);
    c.B0 = Matrix::Zero(10, 10);
    c.B1 = Matrix::Zero(10, 10);
    c.A2(9, 9) = 1.0;
    c.B1(9, 9) = 1.0;
    c.B0(9, 0) = 1.0 - wait.a;
    c.B0(9, 1) = wait.a;

    Block a0{c.A0};
    a0(1, 1) = 1.0 - wait.b;
    a0(1, 2) = wait.b;

    a0(2, 2) = qb * g0;
    a0(2, 3) = qb * g1;
    a0(2, 4) = qb * g2;
    a0(2, 5) = q * g0;
    a0(2, 6) = q * g1;
    a0(2, 7) = q * g2;

    a0(3, 3) = qb * g01;
    a0(3, 4) = qb * g2;
    a0(3, 6) = q * g01;
    a0(3, 7) = q * g2;

    a0(4, 3) = qb * g1;
    a0(4, 4) = qb * g02;
    a0(4, 6) = q * g1;
    a0(4, 7) = q * g02;

    a0(5, 5) = g0;
    a0(5, 6) = g1;
    a0(5, 7) = g2;

    a0(6, 6) = qb;
    a0(6, 10) = q;

    a0(7, 5) = q * g0;
    a0(7, 6) = q * g1;
    a0(7, 7) = qb * g0 + q * g2;
    a0(7, 8) = qb * g1;
    a0(7, 9) = qb * g2;

    a0(8, 6) = q * g01;
    a0(8, 7) = q * g2;
    a0(8, 8) = qb * g01;
    a0(8, 9) = qb * g2;

    a0(9, 6) = q * g1;
    a0(9, 7) = q * g02;
    a0(9, 8) = qb * g1;
    a0(9, 9) = qb * g02;

    return validate_chain(std::move(c));
}

AgePhaseSets age_phase_sets(Discipline d)
{
    switch (d) {
    case Discipline::npb:
    case Discipline::pb:
        return {{2, 3, 4}, {3}};
    case Discipline::npsbr:
        return {{5, 6, 7, 8, 9}, {6}};
    }
    throw InvalidInput("unknown discipline");
}

} // namespace dtaoi
