#include "support.hpp"

#include <sstream>

#include "dtaoi/errors.hpp"
#include "dtaoi/qbd.hpp"

namespace support {

std::string describe(const Scenario& s)
{
    std::ostringstream os;
    os.precision(17);
    os << to_string(s.discipline) << " q=" << s.q << " tagged=" << s.tagged_source << " p=(";
    for (std::size_t i = 0; i < s.p.size(); ++i)
        os << (i ? "," : "") << s.p[i];
    os << ")";
    return os.str();
}

QbdChain chain_for(const Scenario& s)
{
    const auto p = tagged_first(s.p, s.tagged_source);
    const Gammas g = selection_probabilities(p, 1);
    switch (s.discipline) {
    case Discipline::npb:
        return build_npb(g, s.q);
    case Discipline::pb:
        return build_pb(g, s.q);
    case Discipline::npsbr:
        return build_npsbr(g, s.q, npsbr_wait_params(g, s.q, p[0]));
    }
    return {};
}

namespace {

// Alternates synthetic phase-type laws with AoI/PAoI laws from the analyzer.
MatGeom random_law(std::mt19937_64& rng, int index, std::string& what)
{
    if (index % 2 == 0) {
        const int m = std::uniform_int_distribution<int>(1, 6)(rng);
        what = "phase-type of order " + std::to_string(m);
        return random_phase_type(rng, m);
    }
    const Scenario s = random_scenario(rng, 4, 0.1, 0.1);
    const AgeResult r = analyze(s);
    const bool paoi = index % 4 == 1;
    what = std::string(paoi ? "PAoI of " : "AoI of ") + describe(s);
    return paoi ? r.paoi : r.aoi;
}

} // namespace

PropertyReport property_mg_normalization(int cases, std::uint64_t seed)
{
    PropertyReport r{"MG normalization"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        std::string what;
        const MatGeom mg = random_law(rng, i, what);
        const auto m = mg.order();
        const Matrix ia = Matrix::Identity(m, m) - mg.a();
        const double mass = mg.d() + mg.c().dot(ia.fullPivLu().solve(mg.b()));
        const double err = std::abs(mass - 1.0);
        record(r, err <= 1e-9, err, what);
    }
    return r;
}

PropertyReport property_moment_pmf(int cases, std::uint64_t seed)
{
    PropertyReport r{"moment-pmf consistency"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        std::string what;
        const MatGeom mg = random_law(rng, i, what);
        const std::vector<double> pmf = truncate_pmf(mg, 1e-12);
        double m1 = 0.0;
        double m2 = 0.0;
        for (std::size_t l = 0; l < pmf.size(); ++l) {
            const auto x = static_cast<double>(l);
            m1 += x * pmf[l];
            m2 += x * (x - 1.0) * pmf[l];
        }
        const double e1 = std::abs(factorial_moment(mg, 1) - m1) / std::max(1.0, m1);
        const double e2 = std::abs(factorial_moment(mg, 2) - m2) / std::max(1.0, m2);
        const double err = std::max(e1, e2);
        record(r, err <= 1e-8, err, what);
    }
    return r;
}

PropertyReport property_cdf_monotone(int cases, std::uint64_t seed)
{
    PropertyReport r{"cdf monotonicity"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        std::string what;
        const MatGeom mg = random_law(rng, i, what);
        const std::size_t L = truncate_pmf(mg, 1e-10).size();
        std::vector<std::uint64_t> probes;
        for (std::uint64_t l = 0; l < std::min<std::size_t>(L + 2, 100); ++l)
            probes.push_back(l);
        std::uniform_int_distribution<std::uint64_t> pick(0, L + 50);
        for (int k = 0; k < 60; ++k)
            probes.push_back(pick(rng));
        double worst_drop = 0.0;
        bool bounded = true;
        for (std::uint64_t l : probes) {
            const double f0 = cdf_at(mg, l);
            const double f1 = cdf_at(mg, l + 1);
            worst_drop = std::max(worst_drop, f0 - f1);
            bounded = bounded && f0 >= 0.0 && f0 <= 1.0 && f1 >= 0.0 && f1 <= 1.0;
        }
        record(r, bounded && worst_drop <= 1e-14, std::max(0.0, worst_drop), what);
    }
    return r;
}

PropertyReport property_gamma_sum(int cases, std::uint64_t seed)
{
    PropertyReport r{"gamma sums to one"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        const int n = std::uniform_int_distribution<int>(1, 8)(rng);
        std::vector<double> p(static_cast<std::size_t>(n));
        for (auto& x : p) {
            const double u = uniform(rng, 0.0, 1.0);
            x = u < 0.1 ? 0.0 : (u < 0.2 ? 1.0 : uniform(rng, 0.0, 1.0));
        }
        const int tagged = std::uniform_int_distribution<int>(1, n)(rng);
        if (p[static_cast<std::size_t>(tagged - 1)] == 0.0)
            p[static_cast<std::size_t>(tagged - 1)] = 0.5;
        const Gammas g = selection_probabilities(p, tagged);
        const double err = std::abs(g.gamma0 + g.gamma1 + g.gamma2 - 1.0);
        const bool in_range = g.gamma0 >= 0 && g.gamma0 <= 1 && g.gamma1 >= 0 && g.gamma1 <= 1
                              && g.gamma2 >= 0 && g.gamma2 <= 1;
        const bool pairs = g.gamma01 == g.gamma0 + g.gamma1 && g.gamma02 == g.gamma0 + g.gamma2
                           && g.gamma12 == g.gamma1 + g.gamma2;
        record(r, err <= 1e-14 && in_range && pairs, err, "N=" + std::to_string(n));
    }
    return r;
}

namespace {

double stochastic_defect(const QbdChain& c)
{
    const auto m = c.phases();
    const Vector one = Vector::Ones(m);
    double worst = 0.0;
    for (const Matrix* blk : {&c.B0, &c.B1, &c.A0, &c.A1, &c.A2})
        worst = std::max({worst, -blk->minCoeff(), blk->maxCoeff() - 1.0});
    worst = std::max(worst, ((c.B0 + c.A0) * one - one).cwiseAbs().maxCoeff());
    worst = std::max(worst, ((c.B1 + c.A1 + c.A0) * one - one).cwiseAbs().maxCoeff());
    worst = std::max(worst, ((c.A2 + c.A1 + c.A0) * one - one).cwiseAbs().maxCoeff());
    return worst;
}

} // namespace

PropertyReport property_chain_stochastic(int cases, std::uint64_t seed)
{
    PropertyReport r{"chain stochasticity"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        Scenario s = random_scenario(rng, 5, 0.01, 0.01);
        if (i % 10 == 0)
            s.q = 1.0;
        const std::vector<double> p = tagged_first(s.p, s.tagged_source);
        const Gammas g = selection_probabilities(p, 1);
        QbdChain chain;
        std::string what = describe(s);
        try {
            switch (s.discipline) {
            case Discipline::npb:
                chain = build_npb(g, s.q);
                break;
            case Discipline::pb:
                chain = build_pb(g, s.q);
                break;
            case Discipline::npsbr: {
                NpsbrWaitParams w = npsbr_wait_params(g, s.q, p[0]);
                if (i % 3 == 0) {  // injected (a, b), as the builder accepts any valid pair
                    w.a = uniform(rng, 0.0, 1.0);
                    w.b = uniform(rng, 0.0, 1.0);
                    what += " with injected (a, b)";
                }
                chain = build_npsbr(g, s.q, w);
                break;
            }
            }
        } catch (const std::exception& e) {
            record(r, false, 1.0, what + ": " + e.what());
            continue;
        }
        const double defect = stochastic_defect(chain);
        record(r, defect <= 1e-12, defect, what);
    }
    return r;
}

PropertyReport property_npb_npsbr_saturation(int cases, std::uint64_t seed)
{
    PropertyReport r{"NPB = NPSBR when some p_n = 1"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        Scenario s = random_scenario(rng, 4, 0.1, 0.1);
        const std::size_t saturated = std::uniform_int_distribution<std::size_t>(0, s.p.size() - 1)(rng);
        s.p[saturated] = 1.0;
        s.discipline = Discipline::npb;
        const AgeResult npb = analyze(s);
        s.discipline = Discipline::npsbr;
        const AgeResult npsbr = analyze(s);
        const double d = std::max(tv_laws(npb.aoi, npsbr.aoi), tv_laws(npb.paoi, npsbr.paoi));
        record(r, d <= 1e-8, d, describe(s));
    }
    return r;
}

PropertyReport property_seed_determinism(int cases, std::uint64_t seed)
{
    PropertyReport r{"seed determinism"};
    std::mt19937_64 rng(seed);
    for (int i = 0; i < cases; ++i) {
        const Scenario s = random_scenario(rng, 4, 0.05, 0.05);
        const std::uint64_t run_seed = rng();
        const SimStats a = simulate(s, 20'000, run_seed, 1'000);
        const SimStats b = simulate(s, 20'000, run_seed, 1'000);
        record(r, a == b, a == b ? 0.0 : 1.0, describe(s));
    }
    return r;
}

} // namespace support
