#pragma once

#include <cmath>
#include <limits>

namespace bcns {

// Measured rates from the coincidence setup, events per second.
struct SourceRates {
    double r_A = 0;      // Alice singles
    double r_B = 0;      // Bob singles
    double r_p = 0;      // identified coincidences
    double r_bA = 0;     // Alice background
    double r_bB = 0;     // Bob background
    double tau_c = 0;    // coincidence window, seconds
    double tau_d = 0;    // displaced-window offset, seconds (accidental estimation)
};

// Per-round channel probabilities. p_err is measured separately from a
// calibration run, never derived from rates; estimate_probabilities leaves
// it NaN.
struct ExperimentalParams {
    double p_sent_0 = 0;
    double p_sent_1 = 0;
    double p_sent_multi = 0;
    double p_noclick_h = 0;
    double p_noclick_d = 0;
    double p_err = std::numeric_limits<double>::quiet_NaN();
};

void validate(const SourceRates& r);
void validate(const ExperimentalParams& p);

ExperimentalParams estimate_probabilities(const SourceRates& r);

// Upper bound on the accidental-coincidence rate, r_A * r_B * tau_c.
// The reference experiment reports 14.9/s for its rates while this formula
// gives about 1.58/s; the derived p_sent_multi matches the formula, so the
// formula is what we implement.
double accidental_rate_bound(double r_A, double r_B, double tau_c);

} // namespace bcns
