#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dtaoi/optimizer.hpp"
#include "dtaoi/simulator.hpp"
#include "dtaoi/traffic.hpp"

namespace dtaoi {

/// Directory holding the checked-in expected tables.
std::string default_data_dir();

struct OptimumRow {
    Discipline discipline = Discipline::pb;
    double q = 0.0;
    double alpha = 0.0;
    double p1 = 0.0;
    double p2 = 0.0;
    double cost = 0.0;
};

/// CSV with header discipline,q,alpha,p1,p2,cost.
std::vector<OptimumRow> load_optimum_table(const std::string& path);

struct OptimumCheck {
    OptimumRow expected;
    SearchResult found;  // table left empty
    bool p_ok = false;
    bool cost_ok = false;
    bool binds = false;  // p1* + p2* == beta on the grid (true when beta is absent)
    bool ok() const { return p_ok && cost_ok && binds; }
};

struct TableCheckOptions {
    double grid_step = 0.01;
    std::optional<double> beta;
    double p_tol = 0.01;
    double cost_tol = 0.05;
    unsigned threads = 0;
};

/// One grid evaluation per (q, discipline), then one argmin per row.
std::vector<OptimumCheck> check_optimum_table(const std::vector<OptimumRow>& rows,
                                              const TableCheckOptions& opts);

struct TraceExpectation {
    std::map<Discipline, std::vector<std::vector<std::uint64_t>>> ages;  // [source][k]
    std::map<Discipline, std::vector<PaoiEvent>> events;
    std::uint64_t last_slot = 0;
};

/// trace_ages.csv: k,npb_1,npb_2,pb_1,pb_2,npsbr_1,npsbr_2;
/// trace_paoi.csv: discipline,slot,source,value.
TraceExpectation load_trace_expectation(const std::string& ages_path,
                                        const std::string& paoi_path);

struct TraceCheck {
    Discipline discipline = Discipline::npb;
    std::vector<std::string> mismatches;  // human-readable, one per cell/event
    bool ok() const { return mismatches.empty(); }
};

TraceCheck check_trace(const TraceExpectation& expected, Discipline discipline);

/// Three sources with p = (p/7, 2p/7, 4p/7), p = load * q.
Scenario figure_scenario(double q, double load, Discipline discipline);

struct KsCheck {
    Discipline discipline = Discipline::npb;
    int source = 1;
    double ks_aoi = 0.0;
    double ks_paoi = 0.0;
};

/// Simulates each discipline once and compares every source's empirical
/// AoI/PAoI cdf with the analytic one.
std::vector<KsCheck> check_figure(double q, double load, std::uint64_t horizon,
                                  std::uint64_t warmup, std::uint64_t seed);

} // namespace dtaoi
