#include "dtaoi/reproduce.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "dtaoi/analyzer.hpp"
#include "dtaoi/errors.hpp"

namespace dtaoi {

namespace {

constexpr Discipline kAll[] = {Discipline::npb, Discipline::pb, Discipline::npsbr};

std::vector<std::vector<std::string>> read_csv(const std::string& path, std::size_t columns)
{
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot read " + path);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        if (cells.size() != columns)
            throw InvalidInput(path + ": expected " + std::to_string(columns) + " columns in: " + line);
        rows.push_back(std::move(cells));
    }
    return rows;
}

double to_double(const std::string& s)
{
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double x = 0.0;
    in >> x;
    if (!in)
        throw InvalidInput("not a number: " + s);
    return x;
}

std::uint64_t to_count(const std::string& s)
{
    return static_cast<std::uint64_t>(std::stoull(s));
}

} // namespace

std::string default_data_dir()
{
    return DTAOI_DATA_DIR;
}

std::vector<OptimumRow> load_optimum_table(const std::string& path)
{
    std::vector<OptimumRow> out;
    for (const auto& c : read_csv(path, 6))
        out.push_back(OptimumRow{parse_discipline(c[0]), to_double(c[1]), to_double(c[2]),
                                 to_double(c[3]), to_double(c[4]), to_double(c[5])});
    return out;
}

std::vector<OptimumCheck> check_optimum_table(const std::vector<OptimumRow>& rows,
                                              const TableCheckOptions& opts)
{
    std::vector<OptimumCheck> out(rows.size());
    std::vector<bool> done(rows.size(), false);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (done[r])
            continue;
        SearchSpec spec;
        spec.q = rows[r].q;
        spec.discipline = rows[r].discipline;
        spec.grid_step = opts.grid_step;
        spec.beta = opts.beta;
        spec.threads = opts.threads;
        const MeanAgeGrid grid = evaluate_mean_ages(spec);
        for (std::size_t s = r; s < rows.size(); ++s) {
            if (done[s] || rows[s].q != spec.q || rows[s].discipline != spec.discipline)
                continue;
            done[s] = true;
            OptimumCheck& chk = out[s];
            chk.expected = rows[s];
            chk.found = minimize_cost(grid, rows[s].alpha);
            chk.found.table.clear();
            const double slack = 1e-9;
            chk.p_ok = std::abs(chk.found.p1_star - rows[s].p1) <= opts.p_tol + slack
                       && std::abs(chk.found.p2_star - rows[s].p2) <= opts.p_tol + slack;
            chk.cost_ok = std::abs(chk.found.cost_star - rows[s].cost) <= opts.cost_tol + slack;
            chk.binds = !opts.beta
                        || std::abs(chk.found.p1_star + chk.found.p2_star - *opts.beta)
                               < 0.5 * opts.grid_step;
        }
    }
    return out;
}

TraceExpectation load_trace_expectation(const std::string& ages_path, const std::string& paoi_path)
{
    TraceExpectation t;
    const auto ages = read_csv(ages_path, 7);
    for (std::size_t i = 0; i < 3; ++i)
        t.ages[kAll[i]].assign(2, std::vector<std::uint64_t>(ages.size(), 0));
    for (std::size_t row = 0; row < ages.size(); ++row) {
        if (to_count(ages[row][0]) != row)
            throw InvalidInput(ages_path + ": rows must list k = 0, 1, 2, ...");
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t n = 0; n < 2; ++n)
                t.ages[kAll[i]][n][row] = to_count(ages[row][1 + 2 * i + n]);
    }
    t.last_slot = ages.empty() ? 0 : ages.size() - 1;
    for (const auto& c : read_csv(paoi_path, 4))
        t.events[parse_discipline(c[0])].push_back(
            PaoiEvent{to_count(c[1]), static_cast<int>(to_count(c[2])), to_count(c[3])});
    return t;
}

TraceCheck check_trace(const TraceExpectation& expected, Discipline discipline)
{
    TraceCheck chk;
    chk.discipline = discipline;
    const TraceResult got = replay_trace(example_schedule(), discipline, expected.last_slot);
    const auto& ages = expected.ages.at(discipline);
    for (std::size_t n = 0; n < ages.size(); ++n)
        for (std::size_t k = 0; k < ages[n].size(); ++k)
            if (got.aoi[n][k] != ages[n][k]) {
                std::ostringstream msg;
                msg << "AoI of source " << n + 1 << " at k=" << k << ": got " << got.aoi[n][k]
                    << ", expected " << ages[n][k];
                chk.mismatches.push_back(msg.str());
            }
    const auto it = expected.events.find(discipline);
    const std::vector<PaoiEvent> none;
    const auto& want = it == expected.events.end() ? none : it->second;
    if (got.paoi_events != want) {
        std::ostringstream msg;
        msg << "PAoI events: got";
        for (const auto& e : got.paoi_events)
            msg << " (k=" << e.slot << ", source " << e.source << ", " << e.value << ")";
        msg << "; expected";
        for (const auto& e : want)
            msg << " (k=" << e.slot << ", source " << e.source << ", " << e.value << ")";
        chk.mismatches.push_back(msg.str());
    }
    return chk;
}

Scenario figure_scenario(double q, double load, Discipline discipline)
{
    const double p = load * q;
    Scenario s;
    s.p = {p / 7.0, 2.0 * p / 7.0, 4.0 * p / 7.0};
    s.q = q;
    s.discipline = discipline;
    return s;
}

std::vector<KsCheck> check_figure(double q, double load, std::uint64_t horizon,
                                  std::uint64_t warmup, std::uint64_t seed)
{
    std::vector<KsCheck> out;
    for (Discipline d : kAll) {
        Scenario s = figure_scenario(q, load, d);
        const SimStats sim = simulate(s, horizon, seed, warmup);
        for (int n = 1; n <= static_cast<int>(s.p.size()); ++n) {
            s.tagged_source = n;
            const AgeResult res = analyze(s);
            const auto& emp = sim.sources[static_cast<std::size_t>(n - 1)];
            out.push_back(KsCheck{d, n, kolmogorov_distance(emp.aoi, res.aoi),
                                  kolmogorov_distance(emp.paoi, res.paoi)});
        }
    }
    return out;
}

} // namespace dtaoi
