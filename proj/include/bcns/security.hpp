#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <vector>

namespace bcns {

// Derived finite-size parameters. The square-root terms use natural log as
// printed in the source formulas; entropies and code bounds are base 2.
struct SecurityParams {
    double epsilon = 0;
    double M = 0;        // signal count
    double n = 0;        // block length, floor((1 - p_noclick_h - zeta) * M)
    double zeta = 0;
    double alpha1 = 0;
    double m = 0;        // floor((1/2 - alpha1) * n)
    double alpha2 = 0;
    // channel probabilities the storage bounds consume
    double p_sent_1 = std::numeric_limits<double>::quiet_NaN();
    double p_noclick_h = std::numeric_limits<double>::quiet_NaN();
    double p_noclick_d = std::numeric_limits<double>::quiet_NaN();
    double p_err = std::numeric_limits<double>::quiet_NaN();
};

double alpha3(const SecurityParams& sp, double d);

SecurityParams derive_params(double epsilon, double M, double p_noclick_h);

// Inverts n = (1 - p_noclick_h - zeta(M)) * M for M, then derives.
SecurityParams derive_params_for_n(double epsilon, double n_target, double p_noclick_h);

struct StorageAssumption {
    enum class Kind { bounded, depolarizing };
    Kind kind = Kind::bounded;
    double S = 0;   // qubit count
    double r = 1;   // depolarizing noise parameter, kind == depolarizing only
};

struct SecurityVerdict {
    bool secure = false;
    double lambda = 0;
    double lambda_hat = 0;
    double delta_min = 0;
    double R_max = 0;
    double binding_margin = 0;   // best m2*L' - m3*lambda_hat over beta, gamma
    double total_error = 0;
};

double g_of_s(double s);

// max over s in (0,1] of g(s)*n + (2*log2(epsilon) - 1)/s
double uncertainty_min_entropy(double n, double epsilon);

// lambda = (m_left1 * L - S/M) / m_frac, with
// L = max_s [g(s) - 3*log2(1/eps)/(m_left1 * M * s)],
// m_left1 = p_sent_1 - p_noclick_h + p_noclick_d - 3*zeta,
// m_frac = 1 - p_noclick_h - zeta.
double bounded_storage_rate(const SecurityParams& sp, double S);

// The classical-entropy budget m_left1 * M * L entering the storage bounds,
// evaluated at an arbitrary epsilon (the noisy split maximizer varies it).
double bounded_entropy_bits(const SecurityParams& sp, double eps);

// Renyi-alpha capacity of the depolarizing channel, p = (1+r)/2.
double renyi_depolarizing_capacity(double alpha, double r);

// gamma = max over alpha >= 1 of [(alpha-1)/alpha] * (R_hat - C(alpha)),
// clamped at 0. Log grid over [1, 1e6] plus refinement plus the
// alpha -> infinity endpoint.
double depolarizing_strong_converse(double r, double R_hat);

// S * gamma((H_classical - log2(1/eps_dprime)) / S)
double noisy_storage_entropy(double H_classical, double S, double r,
                             double eps_prime, double eps_dprime);

struct NoisySplit {
    double bits = 0;
    double eps_prime = 0;
    double eps_dprime = 0;
};

// Maximizes noisy_storage_entropy over splits eps' + eps'' = epsilon/2,
// with H supplied as a function of eps'.
NoisySplit noisy_storage_max_split(const std::function<double(double)>& H_of_eps_prime,
                                   double epsilon, double S, double r);

// Fixed point of delta = 2(p_err + alpha2)(1/2 - alpha1)/(1/2 - alpha3(delta*n)).
double required_distance(double n, double epsilon, double p_err);

// R_max = 1 - h(delta) - log2(1/eps_code)/n
double max_rate(double delta, double n, double eps_code);

// lambda_hat = 1 - R + 2*log2(1/epsilon)/n
double lambda_threshold(double R, double n, double epsilon);

struct SignalsRequired {
    double M1 = 0, M2 = 0, M3 = 0, M4 = 0;
    bool feasible = false;
    double delta = 0;
    double lambda_hat = 0;   // beta form, h(delta) + 3*beta^2
    double margin = 0;       // m2*L' - m3*lambda_hat
};

SignalsRequired signals_required(const SecurityParams& sp, const StorageAssumption& st,
                                 double beta, double gamma);

// Full verdict: delta_min -> R_max -> lambda_hat -> lambda under the storage
// assumption, plus the signal-count feasibility searched over beta, gamma.
SecurityVerdict security_verdict(const SecurityParams& sp, double eps_code,
                                 const StorageAssumption& st);

// Largest integer S >= 0 with the storage condition still above lambda_hat;
// -1 if even S = 0 fails.
std::int64_t max_tolerable_storage(const SecurityParams& sp, double lambda_hat,
                                   StorageAssumption::Kind kind, double r);

double total_error(double epsilon, double eps_code);

// Error bookkeeping: correctness and hiding each cost 2*epsilon, binding
// 2*epsilon, and the composed statement costs 3*epsilon plus the code error;
// execution reporting uses 2*epsilon + eps_code.
struct ErrorLedger {
    int correctness_eps = 2;
    int hiding_eps = 2;
    int binding_eps = 2;
    int composed_eps = 3;
    int composed_code_terms = 1;
    int reported_eps = 2;
    int reported_code_terms = 1;
};
ErrorLedger error_ledger();

enum class Axis { p_sent_1, p_noclick_h, p_err, S };

struct RegionSpec {
    Axis axis1 = Axis::p_err;
    double lo1 = 0, hi1 = 0;
    Axis axis2 = Axis::S;
    double lo2 = 0, hi2 = 0;
    std::size_t steps1 = 50, steps2 = 50;
};

struct RegionFixed {
    double epsilon = 3e-4;
    double n = 250000;
    double p_sent_1 = 0.125;
    double p_noclick_h = 0.909;
    double p_noclick_d = 0.875;
    double p_err = 0.0412;
    StorageAssumption storage;
};

struct RegionCell {
    double a1 = 0, a2 = 0;
    bool secure = false;
    double lambda = 0, lambda_hat = 0;
};

// The region flag is the figure semantics, lambda > lambda_hat from the
// delta -> R_max -> lambda_hat pipeline at eps_code = epsilon; the signal
// feasibility lemma is a separate design statement and is not part of the
// plotted condition.
std::vector<RegionCell> security_region(const RegionSpec& spec, const RegionFixed& fixed);

void write_region_csv(std::ostream& os, const std::vector<RegionCell>& cells);

// The published five-step derivation chain with its reference values.
struct PipelineReport {
    SecurityParams sp;
    double delta_min = 0;
    double R = 0;          // rate actually used
    double R_max = 0;
    double lambda_hat = 0;
    double eps_code = 0;
    double eps_total = 0;
    std::int64_t S_bounded = 0;
    std::int64_t S_noisy = 0;
    double r_noisy = 0;
};

PipelineReport experiment_pipeline(double epsilon = 0.99e-5,
                                   double n = 250000,
                                   double p_err = 0.0412,
                                   double p_noclick_h = 0.909,
                                   double p_sent_1 = 0.125,
                                   double p_sent_0 = 0.875,
                                   double eps_code = 2e-7,
                                   double R = 0.531,
                                   double r_noisy = 0.9);

} // namespace bcns
