#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dtaoi/qbd.hpp"
#include "dtaoi/traffic.hpp"

namespace dtaoi {

/// Two-source search over (p1, p2) on {p_min, p_min + step, ...} ∩ (0, 1].
struct SearchSpec {
    double q = 0.1;
    double alpha = 1.0;              // weight of source 2, in [0, 1]
    std::optional<double> beta;      // bound on p1 + p2
    Discipline discipline = Discipline::pb;
    double grid_step = 0.01;
    std::optional<double> p_min;     // defaults to grid_step
    SolverOptions solver;
    unsigned threads = 0;            // 0: hardware concurrency
};

void validate(const SearchSpec& spec);

struct GridPoint {
    double p1 = 0.0;
    double p2 = 0.0;
    double mean_aoi_1 = 0.0;
    double mean_aoi_2 = 0.0;
    double cost = 0.0;
};

struct SearchResult {
    double p1_star = 0.0;
    double p2_star = 0.0;
    double cost_star = 0.0;
    std::vector<GridPoint> table;  // every feasible point, p1-major ascending
};

/// E[AoI of source 1] + alpha * E[AoI of source 2] for two sources.
/// InvalidInput if alpha > 0 and p2 == 0.
double cost(double p1, double p2, double q, double alpha, Discipline discipline,
            const SolverOptions& solver = {});

/// Mean ages over the feasible grid of a spec; alpha is not used, so one
/// grid serves every weight.
class MeanAgeGrid {
public:
    MeanAgeGrid() = default;
    explicit MeanAgeGrid(std::vector<GridPoint> points) : points_(std::move(points)) {}

    std::size_t size() const { return points_.size(); }
    const std::vector<GridPoint>& points() const { return points_; }

private:
    friend MeanAgeGrid evaluate_mean_ages(const SearchSpec& spec);
    std::vector<GridPoint> points_;  // cost left at 0
};

MeanAgeGrid evaluate_mean_ages(const SearchSpec& spec);

/// Argmin of the weighted cost over a precomputed grid. Ties go to the
/// larger p1, then the larger p2.
SearchResult minimize_cost(const MeanAgeGrid& grid, double alpha);

/// evaluate_mean_ages + minimize_cost. InvalidInput if no grid point is
/// feasible under beta.
SearchResult grid_search(const SearchSpec& spec);

} // namespace dtaoi
