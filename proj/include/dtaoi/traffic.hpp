#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace dtaoi {

enum class Discipline {
    npb,    // non-preemptive bufferless
    pb,     // preemptive bufferless
    npsbr,  // non-preemptive, single buffer with replacement
};

std::string_view to_string(Discipline d);
/// Accepts "npb", "pb", "npsbr" (case-insensitive). Throws InvalidInput.
Discipline parse_discipline(std::string_view name);

/// Per-slot Bernoulli arrival probabilities p[0..N-1], geometric service
/// completion probability q, and the 1-based source whose age is analyzed.
struct Scenario {
    std::vector<double> p;
    double q = 1.0;
    Discipline discipline = Discipline::npb;
    int tagged_source = 1;
};

/// Throws InvalidInput unless N >= 1, every p_n in [0, 1], q in (0, 1],
/// tagged_source in 1..N and p_tagged > 0.
void validate(const Scenario& s);

/// Per-slot selection probabilities under uniform tie-breaking:
/// gamma0 = no arrival, gamma1 = the tagged source wins the slot,
/// gamma2 = some other source wins.
struct Gammas {
    double gamma0 = 1.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma01 = 1.0;
    double gamma02 = 1.0;
    double gamma12 = 0.0;
};

/// p with the tagged (1-based) source moved to the front; the other
/// sources keep their relative order.
std::vector<double> tagged_first(std::span<const double> p, int tagged);

/// Coefficients tau_0..tau_(N-1) of prod_{n != tagged} (1 - p_n + p_n z),
/// the pgf of the number of competing arrivals in a slot.
std::vector<double> cross_traffic_coeffs(std::span<const double> p, int tagged);

Gammas selection_probabilities(std::span<const double> p, int tagged);

} // namespace dtaoi
