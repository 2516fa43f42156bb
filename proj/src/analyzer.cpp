#include "dtaoi/analyzer.hpp"

#include <algorithm>
#include <sstream>

#include "dtaoi/errors.hpp"

namespace dtaoi {

namespace {

QbdChain build_chain(Discipline d, const Gammas& g, double q,
                     std::optional<NpsbrWaitParams>& wait, double p_tagged)
{
    switch (d) {
    case Discipline::npb:
        return build_npb(g, q);
    case Discipline::pb:
        return build_pb(g, q);
    case Discipline::npsbr:
        wait = npsbr_wait_params(g, q, p_tagged);
        return build_npsbr(g, q, *wait);
    }
    throw InvalidInput("unknown discipline");
}

// First n pmf values by forward iteration.
std::vector<double> pmf_prefix(const MatGeom& mg, std::size_t n)
{
    std::vector<double> out;
    out.reserve(n);
    if (n == 0)
        return out;
    out.push_back(mg.d());
    Vector u = mg.b();
    while (out.size() < n) {
        out.push_back(std::max(0.0, mg.c().dot(u)));
        u = mg.a() * u;
    }
    return out;
}

} // namespace

MatGeom shift_plus_one(const MatGeom& mg)
{
    const int m = mg.order();
    RowVector c(m + 1);
    c << mg.c(), mg.d();
    Matrix a = Matrix::Zero(m + 1, m + 1);
    a.topLeftCorner(m, m) = mg.a();
    a.topRightCorner(m, 1) = mg.b();
    Vector b = Vector::Zero(m + 1);
    b(m) = 1.0;
    return MatGeom::make(std::move(c), std::move(a), std::move(b), 0.0);
}

AgeResult analyze(const Scenario& scenario, const SolverOptions& options)
{
    validate(scenario);
    const std::vector<double> p = tagged_first(scenario.p, scenario.tagged_source);
    const Gammas g = selection_probabilities(p, 1);

    std::optional<NpsbrWaitParams> wait;
    const QbdChain chain = build_chain(scenario.discipline, g, scenario.q, wait, p.front());
    const QbdSolution sol = solve(chain, options);
    const AgePhaseSets sets = age_phase_sets(scenario.discipline);

    MatGeom aoi = restricted_level_distribution(sol, sets.aoi);
    MatGeom paoi = shift_plus_one(restricted_level_distribution(sol, sets.paoi));

    const double mean_aoi = mean(aoi);
    const double mean_paoi = mean(paoi);
    const double var_aoi = variance(aoi);
    const double var_paoi = variance(paoi);
    AgeResult out{std::move(aoi), std::move(paoi), mean_aoi, mean_paoi, var_aoi, var_paoi,
                  SolverMeta{}, 1, Discipline::npb, std::nullopt};
    out.source = scenario.tagged_source;
    out.discipline = scenario.discipline;
    out.wait = wait;
    out.solver_meta = SolverMeta{options.tol,         options.max_iter,    sol.iterations,
                                 sol.method,          sol.residual_R,      sol.residual_pi0,
                                 sol.spectral_radius, chain.phases()};

    // Sanity gate: never auto-corrected.
    if (out.mean_paoi < out.mean_aoi) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "mean PAoI " << out.mean_paoi << " below mean AoI " << out.mean_aoi
            << " for source " << out.source << " under " << to_string(out.discipline);
        throw NumericalError(msg.str());
    }
    return out;
}

std::vector<CdfRow> cdf_table(const AgeResult& result, double tail_eps, std::size_t cap)
{
    if (!(tail_eps > 0.0 && tail_eps < 1.0))
        throw InvalidInput("tail_eps must lie in (0, 1)");
    // Half the budget goes to the tail so that rounding in the running sums
    // cannot push the final cdf below 1 - tail_eps.
    const std::size_t rows = std::max(truncate_pmf(result.aoi, tail_eps / 2, cap).size(),
                                      truncate_pmf(result.paoi, tail_eps / 2, cap).size());
    const std::vector<double> aoi = pmf_prefix(result.aoi, rows);
    const std::vector<double> paoi = pmf_prefix(result.paoi, rows);

    std::vector<CdfRow> table;
    table.reserve(rows);
    double f_aoi = 0.0;
    double f_paoi = 0.0;
    for (std::size_t ell = 0; ell < rows; ++ell) {
        CdfRow row;
        row.ell = ell;
        row.aoi_pmf = aoi[ell];
        row.paoi_pmf = paoi[ell];
        f_aoi += row.aoi_pmf;
        f_paoi += row.paoi_pmf;
        row.aoi_cdf = std::min(f_aoi, 1.0);
        row.paoi_cdf = std::min(f_paoi, 1.0);
        table.push_back(row);
    }
    return table;
}

} // namespace dtaoi
