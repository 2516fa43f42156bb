#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dtaoi/mat_geom.hpp"
#include "dtaoi/traffic.hpp"

namespace dtaoi {

inline constexpr std::uint64_t kDefaultWarmupSlots = 10'000;

struct Histogram {
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(std::uint64_t value);
    void merge(const Histogram& other);
    double pmf(std::uint64_t ell) const;
    double cdf(std::uint64_t ell) const;
    /// Normalized counts; empty if nothing was recorded.
    std::vector<double> pmf_vector() const;

    bool operator==(const Histogram&) const = default;
};

struct SourceStats {
    Histogram aoi;   // one sample per slot after warmup
    Histogram paoi;  // one sample per reception
    Histogram wait;  // queue wait of each delivered packet

    bool operator==(const SourceStats&) const = default;
};

struct SimStats {
    std::vector<SourceStats> sources;  // index n-1 for source n
    Discipline discipline = Discipline::npb;
    std::uint64_t horizon = 0;
    std::uint64_t warmup = 0;
    std::uint64_t seed = 0;

    std::uint64_t recorded_slots() const { return horizon - warmup; }
    /// Histogram addition; the runs must share scenario shape and discipline.
    void merge(const SimStats& other);

    bool operator==(const SimStats&) const = default;
};

/// sup_l |F_emp(l) - F(l)|, with the analytic law truncated at tail_eps.
double kolmogorov_distance(const Histogram& empirical, const MatGeom& law,
                           double tail_eps = 1e-12);

/// Total-variation distance to a (possibly truncated) pmf; mass missing
/// from `pmf` counts as disagreement.
double total_variation(const Histogram& empirical, const std::vector<double>& pmf);

/// Slot-level simulation for slots k = 1..horizon_slots. Within a slot:
///  1. every age is incremented;
///  2. the packet in service (entered at an earlier slot) completes with
///     probability q; on completion its source's age is recorded as a PAoI
///     sample and reset to the packet's time in system;
///  3. one of the slot's arrivals, chosen uniformly, is admitted per the
///     discipline (NPB: only if idle; PB: always, preempting; NPSBR: into
///     the waiting room, replacing its occupant, then into service if idle).
/// Ages start at 0; slots k <= warmup_slots are not recorded. Arrivals,
/// tie-breaking and service use independent generators derived from `seed`,
/// one per source, so the result is a deterministic function of the inputs.
SimStats simulate(const Scenario& scenario, std::uint64_t horizon_slots, std::uint64_t seed,
                  std::uint64_t warmup_slots = kDefaultWarmupSlots);

struct TraceArrival {
    std::uint64_t slot = 0;
    std::uint64_t service_time = 1;
};

struct TraceSchedule {
    std::vector<std::vector<TraceArrival>> arrivals;  // per source, increasing slots
    std::map<std::uint64_t, int> tie_breaks;          // slot -> 1-based winning source
};

struct PaoiEvent {
    std::uint64_t slot = 0;
    int source = 1;
    std::uint64_t value = 0;

    bool operator==(const PaoiEvent&) const = default;
};

struct TraceResult {
    std::vector<std::vector<std::uint64_t>> aoi;  // aoi[n-1][k], k = 0..last_slot
    std::vector<PaoiEvent> paoi_events;           // in slot order
};

/// Runs the same slot pipeline as simulate() with arrivals and service
/// times forced by the schedule. A packet entering service at slot k with
/// service time s completes at slot k + s. Throws InvalidInput on a
/// malformed schedule or when a slot has several arrivals without a valid
/// tie-break.
TraceResult replay_trace(const TraceSchedule& schedule, Discipline discipline,
                         std::uint64_t last_slot);

/// The two-source schedule used to illustrate the disciplines: source 1
/// arrives at k = 1, 5, 9, 13, 17 with service times 5, 2, 7, 3, 1; source 2
/// at k = 1, 7, 13, 19 with 4, 4, 2, 5; source 1 wins k = 1, source 2 wins
/// k = 13.
TraceSchedule example_schedule();

} // namespace dtaoi
