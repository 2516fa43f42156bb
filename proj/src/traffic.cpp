#include "dtaoi/traffic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <string>

#include "dtaoi/errors.hpp"

namespace dtaoi {

std::string_view to_string(Discipline d)
{
    switch (d) {
    case Discipline::npb:
        return "npb";
    case Discipline::pb:
        return "pb";
    case Discipline::npsbr:
        return "npsbr";
    }
    return "?";
}

Discipline parse_discipline(std::string_view name)
{
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (lower == "npb")
        return Discipline::npb;
    if (lower == "pb")
        return Discipline::pb;
    if (lower == "npsbr")
        return Discipline::npsbr;
    throw InvalidInput("unknown discipline '" + std::string(name) + "' (expected npb, pb or npsbr)");
}

void validate(const Scenario& s)
{
    if (s.p.empty())
        throw InvalidInput("scenario needs at least one source");
    for (std::size_t n = 0; n < s.p.size(); ++n) {
        if (!(s.p[n] >= 0.0 && s.p[n] <= 1.0)) {
            std::ostringstream msg;
            msg << "arrival probability of source " << n + 1 << " is outside [0, 1]";
            throw InvalidInput(msg.str());
        }
    }
    if (!(s.q > 0.0 && s.q <= 1.0))
        throw InvalidInput("service probability q must lie in (0, 1]");
    if (s.tagged_source < 1 || s.tagged_source > static_cast<int>(s.p.size()))
        throw InvalidInput("tagged_source out of range");
    if (!(s.p[static_cast<std::size_t>(s.tagged_source - 1)] > 0.0))
        throw InvalidInput("tagged source must have a positive arrival probability");
}

std::vector<double> tagged_first(std::span<const double> p, int tagged)
{
    if (tagged < 1 || tagged > static_cast<int>(p.size()))
        throw InvalidInput("tagged_source out of range");
    const auto t = static_cast<std::size_t>(tagged - 1);
    std::vector<double> out;
    out.reserve(p.size());
    out.push_back(p[t]);
    for (std::size_t n = 0; n < p.size(); ++n)
        if (n != t)
            out.push_back(p[n]);
    return out;
}

std::vector<double> cross_traffic_coeffs(std::span<const double> p, int tagged)
{
    const std::vector<double> ordered = tagged_first(p, tagged);
    std::vector<double> tau{1.0};
    tau.reserve(ordered.size());
    for (std::size_t n = 1; n < ordered.size(); ++n) {
        const double pn = ordered[n];
        tau.push_back(0.0);
        for (std::size_t j = tau.size() - 1; j > 0; --j)
            tau[j] = tau[j] * (1.0 - pn) + tau[j - 1] * pn;
        tau[0] *= 1.0 - pn;
    }
    return tau;
}

Gammas selection_probabilities(std::span<const double> p, int tagged)
{
    const std::vector<double> tau = cross_traffic_coeffs(p, tagged);
    const double p_tagged = p[static_cast<std::size_t>(tagged - 1)];

    Gammas g;
    g.gamma0 = 1.0;
    for (double pn : p)
        g.gamma0 *= 1.0 - pn;
    double share = 0.0;
    for (std::size_t j = 0; j < tau.size(); ++j)
        share += tau[j] / static_cast<double>(j + 1);
    g.gamma1 = p_tagged * share;
    g.gamma2 = std::max(0.0, 1.0 - g.gamma0 - g.gamma1);
    g.gamma01 = g.gamma0 + g.gamma1;
    g.gamma02 = g.gamma0 + g.gamma2;
    g.gamma12 = g.gamma1 + g.gamma2;
    return g;
}

} // namespace dtaoi
