#pragma once

#include <cstdint>
#include <vector>
#include "bcns/rng.hpp"

namespace bcns {

// Click counts per (bit, basis) cell. x indexes the bit, theta the basis
// (0 = HV, 1 = +-45 degrees).
struct DetectorCounts {
    std::uint64_t count[2][2] = {{0, 0}, {0, 0}};
    std::uint64_t total() const {
        return count[0][0] + count[0][1] + count[1][0] + count[1][1];
    }
};

// Keep probabilities that equalize Pr[x,theta|keep] to 1/4 per cell. The
// least frequent cell keeps everything (t = 1); the source text prints
// "sum t = 1" but its published vectors contain 1.0 entries, so max-t = 1
// is the convention that actually matches them.
struct KeepMatrix {
    double t[2][2] = {{1, 1}, {1, 1}};
    double pr_keep = 1.0;
};

KeepMatrix solve_keep_probabilities(const DetectorCounts& counts);

struct SymEvent {
    std::uint8_t x = 0;
    std::uint8_t theta = 0;
};

// Each event kept independently with probability t[x][theta].
std::vector<SymEvent> apply_symmetrization(const std::vector<SymEvent>& events,
                                           const KeepMatrix& keep, Rng& rng);

// Keep/drop decision for a single event, for streaming callers.
bool keep_event(std::uint8_t x, std::uint8_t theta, const KeepMatrix& keep, Rng& rng);

// No-click probability after symmetrization:
// 1 - (1 - p_noclick_h) * pr_keep.
double adjusted_no_click(double p_noclick_h, double pr_keep);

// p_err must be re-measured on the filtered stream; this recounts the
// mismatch fraction over matched-basis pairs.
double recount_error_rate(const std::vector<SymEvent>& alice,
                          const std::vector<SymEvent>& bob);

} // namespace bcns
