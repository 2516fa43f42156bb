#include "dtaoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "dtaoi/errors.hpp"

namespace dtaoi {

void Histogram::add(std::uint64_t value)
{
    if (value >= counts.size())
        counts.resize(value + 1, 0);
    ++counts[value];
    ++total;
}

void Histogram::merge(const Histogram& other)
{
    if (other.counts.size() > counts.size())
        counts.resize(other.counts.size(), 0);
    for (std::size_t i = 0; i < other.counts.size(); ++i)
        counts[i] += other.counts[i];
    total += other.total;
}

double Histogram::pmf(std::uint64_t ell) const
{
    if (total == 0 || ell >= counts.size())
        return 0.0;
    return static_cast<double>(counts[ell]) / static_cast<double>(total);
}

double Histogram::cdf(std::uint64_t ell) const
{
    if (total == 0)
        return 0.0;
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < counts.size() && i <= ell; ++i)
        acc += counts[i];
    return static_cast<double>(acc) / static_cast<double>(total);
}

std::vector<double> Histogram::pmf_vector() const
{
    std::vector<double> out;
    if (total == 0)
        return out;
    out.reserve(counts.size());
    for (std::uint64_t c : counts)
        out.push_back(static_cast<double>(c) / static_cast<double>(total));
    return out;
}

double kolmogorov_distance(const Histogram& empirical, const MatGeom& law, double tail_eps)
{
    if (empirical.total == 0)
        throw InvalidInput("empty histogram");
    const std::vector<double> pmf = truncate_pmf(law, tail_eps);
    const std::size_t n = std::max(pmf.size(), empirical.counts.size());
    double f_law = 0.0;
    std::uint64_t acc = 0;
    double worst = 0.0;
    for (std::size_t ell = 0; ell < n; ++ell) {
        if (ell < pmf.size())
            f_law += pmf[ell];
        if (ell < empirical.counts.size())
            acc += empirical.counts[ell];
        const double f_emp = static_cast<double>(acc) / static_cast<double>(empirical.total);
        worst = std::max(worst, std::abs(f_emp - std::min(f_law, 1.0)));
    }
    return worst;
}

double total_variation(const Histogram& empirical, const std::vector<double>& pmf)
{
    if (empirical.total == 0)
        throw InvalidInput("empty histogram");
    const std::size_t n = std::max(pmf.size(), empirical.counts.size());
    double sum = 0.0;
    double mass = 0.0;
    for (std::size_t ell = 0; ell < n; ++ell) {
        const double q = ell < pmf.size() ? pmf[ell] : 0.0;
        mass += q;
        sum += std::abs(empirical.pmf(ell) - q);
    }
    return 0.5 * (sum + std::max(0.0, 1.0 - mass));
}

void SimStats::merge(const SimStats& other)
{
    if (other.sources.size() != sources.size() || other.discipline != discipline)
        throw InvalidInput("cannot merge simulation runs of different scenarios");
    for (std::size_t n = 0; n < sources.size(); ++n) {
        sources[n].aoi.merge(other.sources[n].aoi);
        sources[n].paoi.merge(other.sources[n].paoi);
        sources[n].wait.merge(other.sources[n].wait);
    }
    horizon += other.horizon;
    warmup += other.warmup;
}

namespace {

struct Packet {
    int source = 0;  // 0-based
    std::uint64_t arrival = 0;
    std::uint64_t service_start = 0;
    std::uint64_t service_time = 0;  // replay only
};

struct Reception {
    int source = 0;
    std::uint64_t paoi = 0;
    std::uint64_t wait = 0;
};

// Server, waiting room and per-source ages, advanced one stage at a time.
class SlotPipeline {
public:
    SlotPipeline(std::size_t sources, Discipline d) : ages_(sources, 0), discipline_(d) {}

    void increment_ages()
    {
        for (auto& a : ages_)
            ++a;
    }

    // A packet admitted at slot k cannot complete before slot k + 1.
    bool can_complete(std::uint64_t k) const
    {
        return in_service_ && in_service_->service_start < k;
    }

    const std::optional<Packet>& in_service() const { return in_service_; }

    Reception complete(std::uint64_t k)
    {
        const Packet done = *in_service_;
        in_service_.reset();
        auto& age = ages_[static_cast<std::size_t>(done.source)];
        Reception r{done.source, age, done.service_start - done.arrival};
        age = k - done.arrival;
        return r;
    }

    void admit(std::optional<Packet> chosen, std::uint64_t k)
    {
        switch (discipline_) {
        case Discipline::npb:
            if (chosen && !in_service_)
                start(*chosen, k);
            break;
        case Discipline::pb:
            if (chosen)
                start(*chosen, k);
            break;
        case Discipline::npsbr:
            if (chosen)
                waiting_ = chosen;
            if (waiting_ && !in_service_) {
                start(*waiting_, k);
                waiting_.reset();
            }
            break;
        }
    }

    const std::vector<std::uint64_t>& ages() const { return ages_; }

private:
    void start(Packet p, std::uint64_t k)
    {
        p.service_start = k;
        in_service_ = p;
    }

    std::vector<std::uint64_t> ages_;
    Discipline discipline_;
    std::optional<Packet> in_service_;
    std::optional<Packet> waiting_;
};

// Independent stream `index` within family `family` for a run seed.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t family, std::uint32_t index)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32U),
                      family, index};
    return std::mt19937_64(seq);
}

bool bernoulli(std::mt19937_64& gen, double p)
{
    const double u = static_cast<double>(gen() >> 11U) * 0x1.0p-53;
    return u < p;
}

__extension__ typedef unsigned __int128 Wide;

std::size_t uniform_index(std::mt19937_64& gen, std::size_t n)
{
    return static_cast<std::size_t>((static_cast<Wide>(gen()) * n) >> 64U);
}

enum StreamFamily : std::uint32_t { kArrivals = 1, kTieBreak = 2, kService = 3 };

} // namespace

SimStats simulate(const Scenario& scenario, std::uint64_t horizon_slots, std::uint64_t seed,
                  std::uint64_t warmup_slots)
{
    validate(scenario);
    if (!(horizon_slots > warmup_slots))
        throw InvalidInput("simulation horizon must exceed the warmup");

    const std::size_t n_sources = scenario.p.size();
    std::vector<std::mt19937_64> arrival_rng;
    arrival_rng.reserve(n_sources);
    for (std::size_t n = 0; n < n_sources; ++n)
        arrival_rng.push_back(make_stream(seed, kArrivals, static_cast<std::uint32_t>(n)));
    std::mt19937_64 tie_rng = make_stream(seed, kTieBreak, 0);
    std::mt19937_64 service_rng = make_stream(seed, kService, 0);

    SimStats stats;
    stats.sources.resize(n_sources);
    stats.discipline = scenario.discipline;
    stats.horizon = horizon_slots;
    stats.warmup = warmup_slots;
    stats.seed = seed;

    SlotPipeline pipeline(n_sources, scenario.discipline);
    std::vector<int> arrived;
    arrived.reserve(n_sources);

    for (std::uint64_t k = 1; k <= horizon_slots; ++k) {
        const bool record = k > warmup_slots;
        pipeline.increment_ages();

        if (pipeline.can_complete(k) && bernoulli(service_rng, scenario.q)) {
            const Reception r = pipeline.complete(k);
            if (record) {
                auto& s = stats.sources[static_cast<std::size_t>(r.source)];
                s.paoi.add(r.paoi);
                s.wait.add(r.wait);
            }
        }

        arrived.clear();
        for (std::size_t n = 0; n < n_sources; ++n)
            if (bernoulli(arrival_rng[n], scenario.p[n]))
                arrived.push_back(static_cast<int>(n));
        std::optional<Packet> chosen;
        if (!arrived.empty()) {
            const int src = arrived.size() == 1 ? arrived.front()
                                                : arrived[uniform_index(tie_rng, arrived.size())];
            chosen = Packet{src, k, 0, 0};
        }
        pipeline.admit(chosen, k);

        if (record) {
            const auto& ages = pipeline.ages();
            for (std::size_t n = 0; n < n_sources; ++n)
                stats.sources[n].aoi.add(ages[n]);
        }
    }
    return stats;
}

TraceResult replay_trace(const TraceSchedule& schedule, Discipline discipline,
                         std::uint64_t last_slot)
{
    const std::size_t n_sources = schedule.arrivals.size();
    if (n_sources == 0)
        throw InvalidInput("trace schedule has no sources");
    for (std::size_t n = 0; n < n_sources; ++n) {
        std::uint64_t prev = 0;
        for (const TraceArrival& a : schedule.arrivals[n]) {
            if (a.slot <= prev || a.service_time < 1) {
                std::ostringstream msg;
                msg << "source " << n + 1 << ": arrival slots must increase from 1 and "
                    << "service times must be positive";
                throw InvalidInput(msg.str());
            }
            prev = a.slot;
        }
    }

    // slot -> arrivals of that slot
    std::map<std::uint64_t, std::vector<Packet>> by_slot;
    for (std::size_t n = 0; n < n_sources; ++n)
        for (const TraceArrival& a : schedule.arrivals[n])
            by_slot[a.slot].push_back(Packet{static_cast<int>(n), a.slot, 0, a.service_time});

    for (const auto& [slot, source] : schedule.tie_breaks) {
        const auto it = by_slot.find(slot);
        bool found = false;
        if (it != by_slot.end())
            for (const Packet& p : it->second)
                found = found || p.source + 1 == source;
        if (!found) {
            std::ostringstream msg;
            msg << "schedule conflict: tie-break at slot " << slot << " names source " << source
                << " which has no arrival there";
            throw InvalidInput(msg.str());
        }
    }

    TraceResult out;
    out.aoi.assign(n_sources, std::vector<std::uint64_t>(last_slot + 1, 0));

    SlotPipeline pipeline(n_sources, discipline);
    for (std::uint64_t k = 1; k <= last_slot; ++k) {
        pipeline.increment_ages();

        const auto& current = pipeline.in_service();
        if (current && current->service_start + current->service_time == k) {
            const Reception r = pipeline.complete(k);
            out.paoi_events.push_back(PaoiEvent{k, r.source + 1, r.paoi});
        }

        std::optional<Packet> chosen;
        if (const auto it = by_slot.find(k); it != by_slot.end()) {
            const auto& candidates = it->second;
            if (candidates.size() == 1) {
                chosen = candidates.front();
            } else {
                const auto tb = schedule.tie_breaks.find(k);
                if (tb == schedule.tie_breaks.end()) {
                    std::ostringstream msg;
                    msg << "schedule conflict: slot " << k << " has " << candidates.size()
                        << " arrivals and no tie-break";
                    throw InvalidInput(msg.str());
                }
                for (const Packet& p : candidates)
                    if (p.source + 1 == tb->second)
                        chosen = p;
            }
        }
        pipeline.admit(chosen, k);

        const auto& ages = pipeline.ages();
        for (std::size_t n = 0; n < n_sources; ++n)
            out.aoi[n][k] = ages[n];
    }
    return out;
}

TraceSchedule example_schedule()
{
    TraceSchedule s;
    s.arrivals = {
        {{1, 5}, {5, 2}, {9, 7}, {13, 3}, {17, 1}},
        {{1, 4}, {7, 4}, {13, 2}, {19, 5}},
    };
    s.tie_breaks = {{1, 1}, {13, 2}};
    return s;
}

} // namespace dtaoi
