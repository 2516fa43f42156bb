#include <doctest.h>

#include <cmath>
#include <string>

#include "../oracle/truncated_chain.hpp"
#include "../support.hpp"
#include "dtaoi/disciplines.hpp"
#include "dtaoi/errors.hpp"
#include "dtaoi/qbd.hpp"

using namespace dtaoi;

namespace {

Matrix scalar(double v)
{
    return Matrix::Constant(1, 1, v);
}

// Level up 0.2, stay 0.5, down 0.3; minimal R = 2/3.
QbdChain scalar_chain()
{
    return QbdChain{scalar(0.8), scalar(0.3), scalar(0.2), scalar(0.5), scalar(0.3)};
}

QbdChain npb_single(double p, double q)
{
    const std::vector<double> ps{p};
    return build_npb(selection_probabilities(ps, 1), q);
}

} // namespace

TEST_CASE("validate_chain")
{
    CHECK_NOTHROW(validate_chain(scalar_chain()));
    CHECK_NOTHROW(validate_chain(npb_single(0.5, 0.5)));

    QbdChain bad = npb_single(0.5, 0.5);
    bad.A0(1, 1) += 0.01;
    try {
        validate_chain(bad);
        FAIL("expected a structure error");
    } catch (const StructureError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("A0") != std::string::npos);
        CHECK(msg.find("row 2") != std::string::npos);
    }

    const Matrix z = Matrix::Zero(3, 3);
    CHECK_THROWS_AS(validate_chain(QbdChain{z, z, z, z, z}), StructureError);

    QbdChain negative = scalar_chain();
    negative.A1(0, 0) = -0.1;
    negative.B1(0, 0) = 0.9;
    CHECK_THROWS_AS(validate_chain(negative), StructureError);
}

TEST_CASE("scalar chain: minimal root and boundary")
{
    const QbdChain c = scalar_chain();
    const RateMatrix rm = solve_rate_matrix(c);
    CHECK(rm.R(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
    CHECK(rm.residual <= 1e-12);
    CHECK(rm.spectral_radius < 1.0);

    const BoundaryVector bv = solve_boundary(c, scalar(2.0 / 3.0));
    CHECK(bv.pi0(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    const QbdSolution sol = solve(c);
    const MatGeom level = level_distribution(sol);
    for (std::uint64_t l = 0; l < 30; ++l)
        CHECK(pmf_at(level, l) == doctest::Approx(std::pow(2.0 / 3.0, l) / 3.0).epsilon(1e-12));
}

TEST_CASE("no up-moves gives R = 0 and a point mass at level zero")
{
    const QbdChain c{scalar(1.0), scalar(0.5), scalar(0.0), scalar(0.5), scalar(0.5)};
    const QbdSolution sol = solve(c);
    CHECK(max_abs(sol.R) == 0.0);
    const MatGeom level = level_distribution(sol);
    CHECK(level.d() == doctest::Approx(1.0));
    CHECK(stationary_residual(sol, c, 10) < 1e-12);
}

TEST_CASE("upward drift is rejected")
{
    const QbdChain c{scalar(0.5), scalar(0.3), scalar(0.5), scalar(0.2), scalar(0.3)};
    CHECK_THROWS_AS(solve(c), NumericalError);
}

TEST_CASE("NPB chain, one source: R against an independent fixed-point iteration")
{
    const QbdChain c = npb_single(0.5, 0.5);
    const QbdSolution sol = solve(c);
    CHECK(sol.residual_R < 1e-11);
    CHECK(sol.residual_pi0 < 1e-11);
    CHECK(sol.spectral_radius < 1.0);

    // Natural iteration from zero; iterates must increase entrywise.
    Matrix R = Matrix::Zero(c.phases(), c.phases());
    bool monotone = true;
    for (int k = 0; k < 100'000; ++k) {
        const Matrix next = c.A0 + R * c.A1 + R * R * c.A2;
        monotone = monotone && (next - R).minCoeff() >= -1e-15;
        const double change = (next - R).cwiseAbs().maxCoeff();
        R = next;
        if (change < 1e-15)
            break;
    }
    CHECK(monotone);
    CHECK((R - sol.R).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(sol.pi0.minCoeff() >= 0.0);
}

TEST_CASE("NPB chain, one source: pi0 against the truncated-chain oracle")
{
    const QbdChain c = npb_single(0.5, 0.5);
    const QbdSolution sol = solve(c);
    const oracle::TruncatedSolution ref = oracle::power_iterate(c, 2000, 1e-13);
    CHECK((ref.levels[0] - sol.pi0).cwiseAbs().maxCoeff() < 1e-10);
    const auto exact = support::mg_prefix(level_distribution(sol), 2000);
    CHECK(oracle::total_variation(oracle::level_pmf(ref), exact) < 1e-9);
}

TEST_CASE("ambiguous boundary")
{
    const Matrix I = Matrix::Identity(2, 2);
    const Matrix Z = Matrix::Zero(2, 2);
    const QbdChain c{I, Z, Z, I, Z};
    CHECK_THROWS_AS(solve_boundary(c, Z), AmbiguousBoundaryError);
}

TEST_CASE("restricted level distributions")
{
    const QbdChain c = npb_single(0.5, 0.5);
    const QbdSolution sol = solve(c);
    const MatGeom full = restricted_level_distribution(sol, {1, 2, 3, 4, 5});
    const MatGeom level = level_distribution(sol);
    for (std::uint64_t l = 0; l < 50; ++l)
        CHECK(pmf_at(full, l) == doctest::Approx(pmf_at(level, l)).epsilon(1e-12));

    CHECK(restricted_level_distribution(sol, {3}).d() == 0.0);
    CHECK_THROWS_AS(restricted_level_distribution(sol, {}), InvalidInput);
    CHECK_THROWS_AS(restricted_level_distribution(sol, {6}), InvalidInput);
    CHECK_THROWS_AS(restricted_level_distribution(sol, {2, 2}), InvalidInput);

    // Phase 2 is never entered.
    Matrix B0(2, 2), B1(2, 2), A0(2, 2), A1(2, 2), A2(2, 2);
    B0 << 0.8, 0, 0.8, 0;
    B1 << 0.3, 0, 0.3, 0;
    A0 << 0.2, 0, 0.2, 0;
    A1 << 0.5, 0, 0.5, 0;
    A2 << 0.3, 0, 0.3, 0;
    const QbdSolution dead = solve(QbdChain{B0, B1, A0, A1, A2});
    CHECK(dead.pi0(0) == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(restricted_level_distribution(dead, {2}), ZeroMassError);
}

TEST_CASE("stationary residual")
{
    const QbdChain c = npb_single(0.5, 0.5);
    QbdSolution sol = solve(c);
    CHECK(stationary_residual(sol, c, 100) < 1e-10);
    sol.R(0, 1) += 1e-3;
    CHECK(stationary_residual(sol, c, 100) > 1e-5);
    CHECK_THROWS_AS(stationary_residual(sol, c, 1), InvalidInput);
}

TEST_CASE("randomized scenarios meet the residual bounds")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 200; ++i) {
        const Scenario s = support::random_scenario(rng, 5, 0.02, 0.02);
        const AgeResult r = analyze(s);
        INFO(support::describe(s));
        CHECK(r.solver_meta.residual_R <= 1e-11);
        CHECK(r.solver_meta.residual_pi0 <= 1e-11);
        CHECK(r.solver_meta.spectral_radius < 1.0);
    }
}
