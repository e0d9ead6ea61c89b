#include "bcns/estimate.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace bcns {

void validate(const SourceRates& r) {
    if (r.r_A < 0 || r.r_B < 0 || r.r_p < 0 || r.r_bA < 0 || r.r_bB < 0)
        throw std::invalid_argument("SourceRates: negative rate");
    if (r.r_p > r.r_A || r.r_p > r.r_B)
        throw std::invalid_argument("SourceRates: r_p exceeds a singles rate");
    if (!(r.tau_c > 0))
        throw std::invalid_argument("SourceRates: tau_c must be positive");
}

void validate(const ExperimentalParams& p) {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(p.p_sent_0) || !in01(p.p_sent_1) || !in01(p.p_sent_multi) ||
        !in01(p.p_noclick_h) || !in01(p.p_noclick_d))
        throw std::invalid_argument("ExperimentalParams: probability outside [0,1]");
    double s = p.p_sent_0 + p.p_sent_1 + p.p_sent_multi;
    if (std::fabs(s - 1.0) > 1e-12)
        throw std::invalid_argument("ExperimentalParams: p_sent components sum to " + std::to_string(s));
    if (std::fabs(p.p_noclick_d - p.p_sent_0) > 1e-12)
        throw std::invalid_argument("ExperimentalParams: p_noclick_d must equal p_sent_0");
    if (!std::isnan(p.p_err) && !in01(p.p_err))
        throw std::invalid_argument("ExperimentalParams: p_err outside [0,1]");
}

ExperimentalParams estimate_probabilities(const SourceRates& r) {
    validate(r);
    if (r.r_p == 0)
        throw std::invalid_argument("estimate_probabilities: r_p must be positive");

    ExperimentalParams p;
    p.p_sent_0 = 1.0 - r.r_p / r.r_A;
    p.p_sent_multi = r.r_A * r.r_B * r.tau_c / r.r_p;
    p.p_sent_1 = 1.0 - p.p_sent_0 - p.p_sent_multi;
    p.p_noclick_h = 1.0 - r.r_p / r.r_A;
    p.p_noclick_d = p.p_sent_0;
    // p_err comes from comparing matched-basis bits in a calibration run
    p.p_err = std::numeric_limits<double>::quiet_NaN();

    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in01(p.p_sent_0) || !in01(p.p_sent_1) || !in01(p.p_sent_multi))
        throw std::invalid_argument("estimate_probabilities: inconsistent rates");
    return p;
}

double accidental_rate_bound(double r_A, double r_B, double tau_c) {
    if (r_A < 0 || r_B < 0 || !(tau_c > 0))
        throw std::invalid_argument("accidental_rate_bound: bad inputs");
    return r_A * r_B * tau_c;
}

} // namespace bcns
