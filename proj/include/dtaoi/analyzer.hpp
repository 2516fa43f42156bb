#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dtaoi/disciplines.hpp"
#include "dtaoi/mat_geom.hpp"
#include "dtaoi/qbd.hpp"
#include "dtaoi/traffic.hpp"

namespace dtaoi {

struct SolverMeta {
    double tol = 0.0;
    int max_iter = 0;
    int iterations = 0;
    std::string method;
    double residual_R = 0.0;
    double residual_pi0 = 0.0;
    double spectral_radius = 0.0;
    int phases = 0;
};

/// Stationary AoI and PAoI laws of one source, both matrix-geometric.
struct AgeResult {
    MatGeom aoi;
    MatGeom paoi;
    double mean_aoi = 0.0;
    double mean_paoi = 0.0;
    double var_aoi = 0.0;
    double var_paoi = 0.0;
    SolverMeta solver_meta;
    int source = 1;  // original 1-based index of the analyzed source
    Discipline discipline = Discipline::npb;
    std::optional<NpsbrWaitParams> wait;  // NPSBR only
};

/// Builds the discipline's chain with the tagged source renumbered to the
/// front, solves it, and reads off AoI = L restricted to the AoI phases and
/// PAoI = 1 + L restricted to the PAoI phase. Throws InvalidInput for a bad
/// scenario, NumericalError from the solver, and NumericalError if
/// mean PAoI < mean AoI.
AgeResult analyze(const Scenario& scenario, const SolverOptions& options = {});

/// Law of X + 1 for X ~ mg, as an MG law of order m + 1:
/// c' = (c, d), A' = [[A, b], [0, 0]], b' = e_(m+1), d' = 0.
MatGeom shift_plus_one(const MatGeom& mg);

struct CdfRow {
    std::uint64_t ell = 0;
    double aoi_pmf = 0.0;
    double aoi_cdf = 0.0;
    double paoi_pmf = 0.0;
    double paoi_cdf = 0.0;
};

/// Rows l = 0..L with both cdfs >= 1 - tail_eps at L. The cdf columns are
/// running sums, so they are nondecreasing.
std::vector<CdfRow> cdf_table(const AgeResult& result, double tail_eps,
                              std::size_t cap = kDefaultTruncationCap);

} // namespace dtaoi
