#include "dtaoi/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "dtaoi/analyzer.hpp"
#include "dtaoi/errors.hpp"

namespace dtaoi {

namespace {

constexpr double kGridSlack = 1e-9;

double tagged_mean_aoi(double tagged_p, double other_p, double q, Discipline d,
                       const SolverOptions& solver)
{
    Scenario s;
    s.p = {tagged_p, other_p};
    s.q = q;
    s.discipline = d;
    s.tagged_source = 1;
    return analyze(s, solver).mean_aoi;
}

// Grid coordinates p_min + i*step, i = 0..count-1.
std::vector<double> axis(const SearchSpec& spec)
{
    const double p_min = spec.p_min.value_or(spec.grid_step);
    const auto count = static_cast<std::size_t>(std::floor((1.0 - p_min) / spec.grid_step + kGridSlack)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = p_min + static_cast<double>(i) * spec.grid_step;
    return out;
}

} // namespace

void validate(const SearchSpec& spec)
{
    if (!(spec.q > 0.0 && spec.q <= 1.0))
        throw InvalidInput("search.q must lie in (0, 1]");
    if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0))
        throw InvalidInput("search.alpha must lie in [0, 1]");
    if (!(spec.grid_step > 0.0 && spec.grid_step <= 1.0))
        throw InvalidInput("search.grid_step must lie in (0, 1]");
    const double p_min = spec.p_min.value_or(spec.grid_step);
    if (!(p_min >= spec.grid_step * (1.0 - kGridSlack) && p_min <= 1.0))
        throw InvalidInput("search.p_min must lie in [grid_step, 1]");
    if (spec.beta && !(*spec.beta > 0.0 && *spec.beta <= 2.0))
        throw InvalidInput("search.beta must lie in (0, 2]");
}

double cost(double p1, double p2, double q, double alpha, Discipline discipline,
            const SolverOptions& solver)
{
    if (alpha > 0.0 && p2 == 0.0)
        throw InvalidInput("cost undefined: source 2 never transmits but alpha > 0");
    const double first = tagged_mean_aoi(p1, p2, q, discipline, solver);
    if (alpha == 0.0)
        return first;
    return first + alpha * tagged_mean_aoi(p2, p1, q, discipline, solver);
}

MeanAgeGrid evaluate_mean_ages(const SearchSpec& spec)
{
    validate(spec);
    const std::vector<double> ps = axis(spec);
    const std::size_t n = ps.size();
    const double limit = spec.beta ? *spec.beta + kGridSlack : 3.0;

    // The mean age of the tagged source depends on (own p, other p) only, so
    // source 2 at (i, j) is the tagged value at (j, i). The feasible set is
    // symmetric, so one pass over it serves both sources.
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (ps[i] + ps[j] <= limit)
                cells.emplace_back(i, j);
    if (cells.empty()) {
        std::ostringstream msg;
        msg << "empty search grid: no (p1, p2) with p1 + p2 <= beta = " << *spec.beta;
        throw InvalidInput(msg.str());
    }

    constexpr double kUnset = -1.0;
    std::vector<double> tagged(n * n, kUnset);

    unsigned workers = spec.threads != 0 ? spec.threads : std::thread::hardware_concurrency();
    workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(cells.size())));

    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&](std::size_t begin, std::size_t end) {
        try {
            for (std::size_t c = begin; c < end; ++c) {
                const auto [i, j] = cells[c];
                tagged[i * n + j] = tagged_mean_aoi(ps[i], ps[j], spec.q, spec.discipline, spec.solver);
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0, cells.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cells.size() + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::size_t begin = std::min(cells.size(), w * chunk);
            const std::size_t end = std::min(cells.size(), begin + chunk);
            pool.emplace_back(run, begin, end);
        }
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    MeanAgeGrid grid;
    grid.points_.reserve(cells.size());
    for (const auto& [i, j] : cells)
        grid.points_.push_back(GridPoint{ps[i], ps[j], tagged[i * n + j], tagged[j * n + i], 0.0});
    return grid;
}

SearchResult minimize_cost(const MeanAgeGrid& grid, double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw InvalidInput("alpha must lie in [0, 1]");
    if (grid.size() == 0)
        throw InvalidInput("empty search grid");

    SearchResult out;
    out.table = grid.points();
    for (auto& g : out.table)
        g.cost = g.mean_aoi_1 + alpha * g.mean_aoi_2;

    // Table is p1-major ascending; scanning it backwards visits larger p1
    // (then larger p2) first, and only a strictly smaller cost replaces it.
    const GridPoint* best = nullptr;
    for (auto it = out.table.rbegin(); it != out.table.rend(); ++it)
        if (best == nullptr || it->cost < best->cost)
            best = &*it;
    out.p1_star = best->p1;
    out.p2_star = best->p2;
    out.cost_star = best->cost;
    return out;
}

SearchResult grid_search(const SearchSpec& spec)
{
    return minimize_cost(evaluate_mean_ages(spec), spec.alpha);
}

} // namespace dtaoi
