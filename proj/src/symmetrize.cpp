#include "bcns/symmetrize.hpp"

#include <stdexcept>

namespace bcns {

KeepMatrix solve_keep_probabilities(const DetectorCounts& counts) {
    for (int x = 0; x < 2; ++x)
        for (int th = 0; th < 2; ++th)
            if (counts.count[x][th] == 0)
                throw std::invalid_argument("solve_keep_probabilities: empty detector cell");

    const double total = double(counts.total());
    double min_p = 2.0;
    for (int x = 0; x < 2; ++x)
        for (int th = 0; th < 2; ++th)
            min_p = std::min(min_p, double(counts.count[x][th]) / total);

    KeepMatrix keep;
    for (int x = 0; x < 2; ++x)
        for (int th = 0; th < 2; ++th)
            keep.t[x][th] = min_p / (double(counts.count[x][th]) / total);
    keep.pr_keep = 4.0 * min_p;
    return keep;
}

bool keep_event(std::uint8_t x, std::uint8_t theta, const KeepMatrix& keep, Rng& rng) {
    return rng.bernoulli(keep.t[x & 1][theta & 1]);
}

std::vector<SymEvent> apply_symmetrization(const std::vector<SymEvent>& events,
                                           const KeepMatrix& keep, Rng& rng) {
    std::vector<SymEvent> out;
    out.reserve(events.size());
    for (const auto& e : events)
        if (keep_event(e.x, e.theta, keep, rng)) out.push_back(e);
    return out;
}

double adjusted_no_click(double p_noclick_h, double pr_keep) {
    if (p_noclick_h < 0 || p_noclick_h > 1 || pr_keep < 0 || pr_keep > 1)
        throw std::invalid_argument("adjusted_no_click: arguments outside [0,1]");
    return 1.0 - (1.0 - p_noclick_h) * pr_keep;
}

double recount_error_rate(const std::vector<SymEvent>& alice,
                          const std::vector<SymEvent>& bob) {
    if (alice.size() != bob.size())
        throw std::invalid_argument("recount_error_rate: paired streams differ in length");
    std::uint64_t matched = 0, errors = 0;
    for (std::size_t i = 0; i < alice.size(); ++i) {
        if (alice[i].theta != bob[i].theta) continue;
        ++matched;
        if (alice[i].x != bob[i].x) ++errors;
    }
    if (matched == 0)
        throw std::invalid_argument("recount_error_rate: no matched-basis pairs");
    return double(errors) / double(matched);
}

} // namespace bcns
