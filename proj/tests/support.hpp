#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dtaoi/analyzer.hpp"
#include "dtaoi/disciplines.hpp"
#include "dtaoi/mat_geom.hpp"
#include "dtaoi/simulator.hpp"
#include "dtaoi/traffic.hpp"

namespace support {

using namespace dtaoi;

inline constexpr Discipline kDisciplines[] = {Discipline::npb, Discipline::pb, Discipline::npsbr};

// pmf values for l = 0..n-1 by forward iteration, independent of truncate_pmf.
inline std::vector<double> mg_prefix(const MatGeom& mg, std::size_t n)
{
    std::vector<double> out;
    if (n == 0)
        return out;
    out.push_back(mg.d());
    Vector u = mg.b();
    while (out.size() < n) {
        out.push_back(mg.c().dot(u));
        u = mg.a() * u;
    }
    return out;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Discrete phase-type law: rows of A sum to at most `max_row`, exit vector
// b = (I - A) 1, and c carries mass 1 - d.
inline MatGeom random_phase_type(std::mt19937_64& rng, int m, double max_row = 0.9)
{
    Matrix a(m, m);
    for (int i = 0; i < m; ++i) {
        double row = 0.0;
        for (int j = 0; j < m; ++j)
            row += a(i, j) = uniform(rng, 0.0, 1.0);
        a.row(i) *= uniform(rng, 0.05, max_row) / row;
    }
    const double d = uniform(rng, 0.0, 1.0) < 0.3 ? uniform(rng, 0.0, 0.5) : 0.0;
    RowVector c(m);
    for (int j = 0; j < m; ++j)
        c(j) = uniform(rng, 0.0, 1.0);
    c *= (1.0 - d) / c.sum();
    const Vector b = (Matrix::Identity(m, m) - a) * Vector::Ones(m);
    return MatGeom::make(c, a, b, d);
}

// Random scenario; tagged source p >= p_floor keeps tails short.
inline Scenario random_scenario(std::mt19937_64& rng, int max_sources = 4, double p_floor = 0.05,
                                double q_floor = 0.05)
{
    Scenario s;
    const int n = std::uniform_int_distribution<int>(1, max_sources)(rng);
    for (int i = 0; i < n; ++i)
        s.p.push_back(uniform(rng, 0.0, 1.0));
    s.tagged_source = std::uniform_int_distribution<int>(1, n)(rng);
    s.p[static_cast<std::size_t>(s.tagged_source - 1)] = uniform(rng, p_floor, 1.0);
    s.q = uniform(rng, q_floor, 1.0);
    s.discipline = kDisciplines[std::uniform_int_distribution<int>(0, 2)(rng)];
    return s;
}

inline double tv(const std::vector<double>& a, const std::vector<double>& b)
{
    const std::size_t n = std::max(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        s += std::abs((i < a.size() ? a[i] : 0.0) - (i < b.size() ? b[i] : 0.0));
    return 0.5 * s;
}

// TV between two MG laws, both truncated where their tails drop below 1e-13.
inline double tv_laws(const MatGeom& x, const MatGeom& y)
{
    const std::size_t n = std::max(truncate_pmf(x, 1e-13).size(), truncate_pmf(y, 1e-13).size());
    return tv(mg_prefix(x, n), mg_prefix(y, n));
}

// Outcome of a randomized property run.
struct PropertyReport {
    std::string name;
    int cases = 0;
    int failures = 0;
    double worst = 0.0;  // largest observed violation measure
    std::string first_failure;
    bool ok() const { return cases > 0 && failures == 0; }
};

inline void record(PropertyReport& r, bool pass, double measure, const std::string& what)
{
    ++r.cases;
    r.worst = std::max(r.worst, measure);
    if (!pass) {
        if (r.failures == 0)
            r.first_failure = what;
        ++r.failures;
    }
}

std::string describe(const Scenario& s);

// The analyzer's chain for a scenario, tagged source renumbered to the front.
QbdChain chain_for(const Scenario& s);

PropertyReport property_mg_normalization(int cases, std::uint64_t seed);
PropertyReport property_moment_pmf(int cases, std::uint64_t seed);
PropertyReport property_cdf_monotone(int cases, std::uint64_t seed);
PropertyReport property_gamma_sum(int cases, std::uint64_t seed);
PropertyReport property_chain_stochastic(int cases, std::uint64_t seed);
PropertyReport property_npb_npsbr_saturation(int cases, std::uint64_t seed);
PropertyReport property_seed_determinism(int cases, std::uint64_t seed);

} // namespace support
