#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dtaoi/qbd.hpp"
#include "dtaoi/traffic.hpp"

namespace dtaoi {

// Phase numbering (1-based) is a public contract: analyzer phase sets
// depend on it.
//
// NPB / PB, 5 phases:
//   1 first tagged packet in service
//   2 first tagged packet delivered, server idle
//   3 first tagged packet delivered, second tagged packet in service
//   4 first tagged packet delivered, another source's packet in service
//   5 second tagged packet delivered (PB: or first one preempted);
//     the level counts down to zero before the next cycle
//
// NPSBR, 10 phases:
//   1 first successful tagged packet waiting
//   2 ... in service, waiting room empty
//   3 ... in service, a tagged packet waiting
//   4 ... in service, another source's packet waiting
//   5 first delivered, system empty
//   6 second successful tagged packet in service
//   7 other source in service, waiting room empty
//   8 other source in service, a tagged packet waiting
//   9 other source in service, another source's packet waiting
//  10 second delivered; count down to the next cycle

/// NPB chain: A1 = 0, A2 = B1 = e5 e5^T, B0 = e5 e1^T.
QbdChain build_npb(const Gammas& g, double q);

/// PB chain: as NPB with preemption terms in A0.
QbdChain build_pb(const Gammas& g, double q);

/// Queue-wait law of successful tagged packets under NPSBR:
/// Pr{D = 0} = a, Pr{D = l} = (1 - a) b (1 - b)^(l-1) for l >= 1.
struct NpsbrWaitParams {
    double a = 1.0;
    double b = 1.0;
    double p_s = 1.0;                 // success probability of a tagged packet
    std::array<double, 3> x{};        // stationary occupancy (0, 1, 2 packets)
    double r = 0.0;                   // survival probability of a waiting packet
    double gamma = 1.0;               // Pr{tagged arrival is picked | it arrived}
};

NpsbrWaitParams npsbr_wait_params(const Gammas& g, double q, double p_tagged);

/// Pr{D = ell} from the mixture.
double npsbr_wait_pmf(const NpsbrWaitParams& w, std::uint64_t ell);

/// NPSBR chain, using (a, b) from `wait`: A0 row 1 = (1-b, b, 0, ...),
/// A2 = B1 = e10 e10^T, B0 row 10 = (1-a, a, 0, ...).
QbdChain build_npsbr(const Gammas& g, double q, const NpsbrWaitParams& wait);

struct AgePhaseSets {
    std::vector<int> aoi;   // phases on which the level equals the AoI
    std::vector<int> paoi;  // phases on which level + 1 is a PAoI sample
};

AgePhaseSets age_phase_sets(Discipline d);

} // namespace dtaoi
