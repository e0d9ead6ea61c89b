#include "bcns/security.hpp"
#include "bcns/codes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace bcns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Golden-section maximization on [lo, hi] for a unimodal f, driven to a
// relative interval width of about 1e-10.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double* arg = nullptr) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-10 * (std::abs(a) + std::abs(b) + 1e-12); ++it) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    if (arg) *arg = x;
    return f(x);
}

// Coarse grid to bracket the maximum, then golden-section inside the
// bracketing cells. Grid may be log spaced.
double grid_then_golden(const std::function<double(double)>& f, double lo, double hi,
                        std::size_t steps, bool log_spaced, double* arg = nullptr) {
    double best = -kInf;
    std::size_t best_i = 0;
    std::vector<double> xs(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(steps);
        double x = log_spaced ? lo * std::pow(hi / lo, t) : lo + t * (hi - lo);
        xs[i] = x;
        double v = f(x);
        if (v > best) { best = v; best_i = i; }
    }
    double a = xs[best_i == 0 ? 0 : best_i - 1];
    double b = xs[best_i == steps ? steps : best_i + 1];
    double x_ref = 0;
    double refined = golden_max(f, a, b, &x_ref);
    if (refined >= best) {
        if (arg) *arg = x_ref;
        return refined;
    }
    if (arg) *arg = xs[best_i];
    return best;
}

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1)");
}

double require_prob(double p, const char* name) {
    if (!(p >= 0.0) || !(p <= 1.0))
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    return p;
}

} // namespace

double alpha3(const SecurityParams& sp, double d) {
    if (!(d > 0))
        throw std::invalid_argument("alpha3 needs a positive block length");
    return std::sqrt(std::log(1.0 / sp.epsilon) / d);
}

SecurityParams derive_params(double epsilon, double M, double p_noclick_h) {
    check_epsilon(epsilon);
    require_prob(p_noclick_h, "p_noclick_h");
    if (!(M >= 1.0))
        throw std::invalid_argument("M must be at least 1");
    SecurityParams sp;
    sp.epsilon = epsilon;
    sp.M = M;
    sp.p_noclick_h = p_noclick_h;
    sp.zeta = std::sqrt(std::log(2.0 / epsilon) / (2.0 * M));
    sp.n = std::floor((1.0 - p_noclick_h - sp.zeta) * M);
    if (!(sp.n > 0))
        throw std::invalid_argument("parameters give an empty block, n <= 0");
    sp.alpha1 = std::sqrt(std::log(1.0 / epsilon) / (2.0 * sp.n));
    sp.m = std::floor((0.5 - sp.alpha1) * sp.n);
    if (!(sp.m > 0))
        throw std::invalid_argument("parameters give an empty test set, m <= 0");
    sp.alpha2 = std::sqrt(std::log(2.0 / epsilon) / (2.0 * sp.m));
    return sp;
}

SecurityParams derive_params_for_n(double epsilon, double n_target, double p_noclick_h) {
    check_epsilon(epsilon);
    require_prob(p_noclick_h, "p_noclick_h");
    if (!(n_target >= 1.0))
        throw std::invalid_argument("target n must be at least 1");
    double frac = 1.0 - p_noclick_h;
    if (!(frac > 0))
        throw std::invalid_argument("p_noclick_h = 1 leaves no signals");
    double M = n_target / frac;
    for (int it = 0; it < 200; ++it) {
        double zeta = std::sqrt(std::log(2.0 / epsilon) / (2.0 * M));
        double denom = 1.0 - p_noclick_h - zeta;
        if (!(denom > 0))
            throw std::invalid_argument("no M reaches the target n at this epsilon");
        double next = n_target / denom;
        if (std::abs(next - M) <= 1e-9 * M) { M = next; break; }
        M = next;
    }
    // land exactly on the target after the floor
    for (int it = 0; it < 64; ++it) {
        double zeta = std::sqrt(std::log(2.0 / epsilon) / (2.0 * M));
        if (std::floor((1.0 - p_noclick_h - zeta) * M) >= n_target) break;
        M = std::nextafter(M * (1.0 + 1e-12), kInf);
    }
    SecurityParams sp = derive_params(epsilon, M, p_noclick_h);
    if (sp.n != n_target)
        sp = derive_params(epsilon, M * (n_target + 0.5) / sp.n, p_noclick_h);
    if (sp.n != n_target)
        throw std::runtime_error("failed to invert M for the target n");
    return sp;
}

double g_of_s(double s) {
    if (!(s > 0))
        throw std::invalid_argument("g(s) is defined for s > 0");
    if (s < 1e-5) {
        // log2(1+2^s) - (1+s) = -s/2 + s^2 ln2/8 + O(s^4), third order cancels
        return 0.5 - s * (M_LN2 / 8.0);
    }
    return -(std::log2(1.0 + std::exp2(s)) - (1.0 + s)) / s;
}

double uncertainty_min_entropy(double n, double epsilon) {
    check_epsilon(epsilon);
    if (!(n > 0))
        throw std::invalid_argument("n must be positive");
    double c = 1.0 - 2.0 * std::log2(epsilon);   // positive
    auto f = [&](double s) { return g_of_s(s) * n - c / s; };
    return grid_then_golden(f, 1e-9, 1.0, 2048, true);
}

double bounded_entropy_bits(const SecurityParams& sp, double eps) {
    check_epsilon(eps);
    double m_left1 = sp.p_sent_1 - sp.p_noclick_h + sp.p_noclick_d - 3.0 * sp.zeta;
    if (!(m_left1 > 0))
        throw std::invalid_argument("m_left1 <= 0: no single-photon rounds survive the tail bounds");
    double c = 3.0 * std::log2(1.0 / eps) / (m_left1 * sp.M);
    auto f = [&](double s) { return g_of_s(s) - c / s; };
    double L = grid_then_golden(f, 1e-9, 1.0, 2048, true);
    return m_left1 * sp.M * L;
}

double bounded_storage_rate(const SecurityParams& sp, double S) {
    if (!(S >= 0))
        throw std::invalid_argument("storage size must be nonnegative");
    require_prob(sp.p_sent_1, "p_sent_1");
    require_prob(sp.p_noclick_d, "p_noclick_d");
    double m_frac = 1.0 - sp.p_noclick_h - sp.zeta;
    if (!(m_frac > 0))
        throw std::invalid_argument("m_frac <= 0: no rounds survive truncation");
    double H = bounded_entropy_bits(sp, sp.epsilon);
    return (H / sp.M - S / sp.M) / m_frac;
}

double renyi_depolarizing_capacity(double alpha, double r) {
    require_prob(r, "r");
    double p = 0.5 * (1.0 + r);
    if (p >= 1.0) return 1.0;
    double q = 1.0 - p;
    if (std::isinf(alpha)) return 1.0 + std::log2(p);
    if (!(alpha >= 1.0))
        throw std::invalid_argument("capacity is used for alpha >= 1");
    if (std::abs(alpha - 1.0) < 1e-9)
        return 1.0 - binary_entropy(p);
    // log2(p^a + q^a) without underflow: a*log2(p) + log2(1 + (q/p)^a)
    double log_sum = alpha * std::log2(p) + std::log1p(std::exp(alpha * std::log(q / p))) / M_LN2;
    return 1.0 - log_sum / (1.0 - alpha);
}

double depolarizing_strong_converse(double r, double R_hat) {
    require_prob(r, "r");
    if (!std::isfinite(R_hat))
        throw std::invalid_argument("R_hat must be finite");
    auto f = [&](double a) { return (a - 1.0) / a * (R_hat - renyi_depolarizing_capacity(a, r)); };
    double best = grid_then_golden(f, 1.0, 1e6, 4000, true);
    // alpha -> infinity endpoint
    double tail = R_hat - renyi_depolarizing_capacity(kInf, r);
    best = std::max(best, tail);
    return std::max(best, 0.0);
}

double noisy_storage_entropy(double H_classical, double S, double r,
                             double eps_prime, double eps_dprime) {
    if (!(eps_prime > 0) || !(eps_dprime > 0))
        throw std::invalid_argument("both split errors must be positive");
    if (!(S >= 1.0))
        throw std::invalid_argument("the noisy bound needs S >= 1");
    double R_hat = (H_classical - std::log2(1.0 / eps_dprime)) / S;
    return S * depolarizing_strong_converse(r, R_hat);
}

NoisySplit noisy_storage_max_split(const std::function<double(double)>& H_of_eps_prime,
                                   double epsilon, double S, double r) {
    check_epsilon(epsilon);
    double budget = 0.5 * epsilon;
    auto value = [&](double t) {
        double ep = (1.0 - t) * budget;
        double edp = t * budget;
        return noisy_storage_entropy(H_of_eps_prime(ep), S, r, ep, edp);
    };
    double t_best = 0;
    double bits = grid_then_golden(value, 1e-6, 1.0 - 1e-6, 400, true, &t_best);
    NoisySplit out;
    out.bits = bits;
    out.eps_dprime = t_best * budget;
    out.eps_prime = budget - out.eps_dprime;
    return out;
}

double required_distance(double n, double epsilon, double p_err) {
    check_epsilon(epsilon);
    require_prob(p_err, "p_err");
    if (!(n > 0))
        throw std::invalid_argument("n must be positive");
    double lg1 = std::log(1.0 / epsilon);
    double lg2 = std::log(2.0 / epsilon);
    double a1 = std::sqrt(lg1 / (2.0 * n));
    double m = std::floor((0.5 - a1) * n);
    if (!(m > 0))
        throw std::invalid_argument("n too small for a test set");
    double a2 = std::sqrt(lg2 / (2.0 * m));
    double num = 2.0 * (p_err + a2) * (0.5 - a1);
    double delta = 2.0 * p_err;
    if (!(delta > 0) || std::sqrt(lg1 / (delta * n)) >= 0.5)
        delta = num / 0.5;   // seed where the iteration map is defined
    for (int it = 0; it < 10000; ++it) {
        double a3 = std::sqrt(lg1 / (delta * n));
        if (a3 >= 0.5)
            throw std::domain_error("alpha3 >= 1/2: no attainable distance at these parameters");
        double next = num / (0.5 - a3);
        if (!(next > 0) || next >= 1.0)
            throw std::domain_error("distance iteration diverged");
        if (std::abs(next - delta) < 1e-9) return next;
        delta = next;
    }
    throw std::domain_error("distance iteration did not converge");
}

double max_rate(double delta, double n, double eps_code) {
    if (!(delta > 0) || !(delta < 0.5))
        throw std::invalid_argument("relative distance must lie in (0, 1/2)");
    check_epsilon(eps_code);
    if (!(n > 0))
        throw std::invalid_argument("n must be positive");
    return 1.0 - binary_entropy(delta) - std::log2(1.0 / eps_code) / n;
}

double lambda_threshold(double R, double n, double epsilon) {
    if (!(R > 0) || !(R < 1))
        throw std::invalid_argument("rate must lie in (0, 1)");
    check_epsilon(epsilon);
    return 1.0 - R + 2.0 * std::log2(1.0 / epsilon) / n;
}

SignalsRequired signals_required(const SecurityParams& sp, const StorageAssumption& st,
                                 double beta, double gamma) {
    if (!(beta > 0) || !(beta <= 0.01) || !(gamma > 0) || !(gamma <= 0.01))
        throw std::invalid_argument("beta and gamma must lie in (0, 0.01]");
    double eps = sp.epsilon;
    SignalsRequired out;
    double m2 = sp.p_sent_1 - sp.p_noclick_h + sp.p_noclick_d - 3.0 * gamma;
    double m3 = 1.0 - sp.p_noclick_h;
    out.delta = 2.0 * (sp.p_err + beta / std::sqrt(1.0 - 2.0 * beta)) / (1.0 - 4.0 * std::sqrt(5.0) * beta);
    if (!(out.delta > 0) || !(out.delta < 1.0)) return out;
    // for delta past 1/2 the extraction argument is void; h(1/2) = 1 makes the
    // margin negative and the point infeasible
    out.lambda_hat = binary_entropy(std::min(out.delta, 0.5)) + 3.0 * beta * beta;
    auto f = [&](double s) { return g_of_s(s) - 3.0 * eps / s; };
    double Lp = grid_then_golden(f, 1e-9, 1.0, 2048, true);
    out.margin = m2 * Lp - m3 * out.lambda_hat;
    if (!(m2 > 0) || !(m3 - gamma > 0) || !(out.margin > 0)) return out;
    out.M1 = std::log2(2.0 / eps) / (2.0 * gamma * gamma);
    out.M2 = std::log2(1.0 / eps) / (eps * m2);
    out.M3 = std::log2(2.0 / eps) / ((m3 - gamma) * beta * beta);
    out.M4 = st.S / out.margin;
    out.feasible = true;
    return out;
}

namespace {

// lambda under the storage assumption, normalized so that the comparison
// against lambda_hat is uniform across both models.
double storage_lambda(const SecurityParams& sp, const StorageAssumption& st) {
    if (st.kind == StorageAssumption::Kind::bounded)
        return bounded_storage_rate(sp, st.S);
    double m_frac = 1.0 - sp.p_noclick_h - sp.zeta;
    if (!(m_frac > 0))
        throw std::invalid_argument("m_frac <= 0: no rounds survive truncation");
    if (st.S < 1.0) {
        // a storage device below one qubit retains nothing
        return bounded_storage_rate(sp, 0.0);
    }
    auto H = [&](double ep) { return bounded_entropy_bits(sp, ep); };
    NoisySplit split = noisy_storage_max_split(H, sp.epsilon, st.S, st.r);
    return split.bits / (sp.M * m_frac);
}

} // namespace

SecurityVerdict security_verdict(const SecurityParams& sp, double eps_code,
                                 const StorageAssumption& st) {
    SecurityVerdict v;
    v.total_error = total_error(sp.epsilon, eps_code);
    try {
        v.delta_min = required_distance(sp.n, sp.epsilon, sp.p_err);
        v.R_max = max_rate(v.delta_min, sp.n, eps_code);
        if (!(v.R_max > 0)) return v;
        v.lambda_hat = lambda_threshold(v.R_max, sp.n, sp.epsilon);
        v.lambda = storage_lambda(sp, st);
    } catch (const std::exception&) {
        return v;
    }
    bool feasible = false;
    double best_margin = -kInf;
    for (int bi = 0; bi < 12; ++bi) {
        double beta = 1e-4 * std::pow(100.0, bi / 11.0);
        for (int gi = 0; gi < 12; ++gi) {
            double gamma = 1e-4 * std::pow(100.0, gi / 11.0);
            SignalsRequired s = signals_required(sp, st, beta, gamma);
            if (!s.feasible) continue;
            double M_need = std::max(std::max(s.M1, s.M2), std::max(s.M3, s.M4));
            if (sp.M >= M_need) {
                feasible = true;
                best_margin = std::max(best_margin, s.margin);
            } else if (!feasible) {
                best_margin = std::max(best_margin, s.margin);
            }
        }
    }
    v.binding_margin = std::isfinite(best_margin) ? best_margin : 0.0;
    v.secure = (v.lambda > v.lambda_hat) && feasible;
    return v;
}

std::int64_t max_tolerable_storage(const SecurityParams& sp, double lambda_hat,
                                   StorageAssumption::Kind kind, double r) {
    StorageAssumption st;
    st.kind = kind;
    st.r = r;
    auto ok = [&](std::int64_t S) {
        st.S = static_cast<double>(S);
        try {
            return storage_lambda(sp, st) > lambda_hat;
        } catch (const std::exception&) {
            return false;
        }
    };
    if (!ok(0)) return -1;
    std::int64_t lo = 0, hi = 1;
    while (ok(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > (std::int64_t{1} << 50))
            throw std::runtime_error("storage bound search ran away");
    }
    while (hi - lo > 1) {
        std::int64_t mid = lo + (hi - lo) / 2;
        if (ok(mid)) lo = mid; else hi = mid;
    }
    return lo;
}

double total_error(double epsilon, double eps_code) {
    check_epsilon(epsilon);
    check_epsilon(eps_code);
    return 2.0 * epsilon + eps_code;
}

ErrorLedger error_ledger() { return ErrorLedger{}; }

namespace {

void apply_axis(Axis ax, double value, SecurityParams& probs, StorageAssumption& st) {
    switch (ax) {
    case Axis::p_sent_1: probs.p_sent_1 = value; break;
    case Axis::p_noclick_h: probs.p_noclick_h = value; break;
    case Axis::p_err: probs.p_err = value; break;
    case Axis::S: st.S = value; break;
    }
}

} // namespace

std::vector<RegionCell> security_region(const RegionSpec& spec, const RegionFixed& fixed) {
    std::vector<RegionCell> cells;
    cells.reserve((spec.steps1 + 1) * (spec.steps2 + 1));
    for (std::size_t i = 0; i <= spec.steps1; ++i) {
        double a1 = spec.lo1 + (spec.hi1 - spec.lo1) * (spec.steps1 ? static_cast<double>(i) / spec.steps1 : 0.0);
        for (std::size_t j = 0; j <= spec.steps2; ++j) {
            double a2 = spec.lo2 + (spec.hi2 - spec.lo2) * (spec.steps2 ? static_cast<double>(j) / spec.steps2 : 0.0);
            RegionCell cell;
            cell.a1 = a1;
            cell.a2 = a2;
            SecurityParams probs;
            probs.p_sent_1 = fixed.p_sent_1;
            probs.p_noclick_h = fixed.p_noclick_h;
            probs.p_noclick_d = fixed.p_noclick_d;
            probs.p_err = fixed.p_err;
            StorageAssumption st = fixed.storage;
            apply_axis(spec.axis1, a1, probs, st);
            apply_axis(spec.axis2, a2, probs, st);
            try {
                SecurityParams sp = derive_params_for_n(fixed.epsilon, fixed.n, probs.p_noclick_h);
                sp.p_sent_1 = probs.p_sent_1;
                sp.p_noclick_d = probs.p_noclick_d;
                sp.p_err = probs.p_err;
                double delta = required_distance(sp.n, sp.epsilon, sp.p_err);
                double R_max = max_rate(delta, sp.n, sp.epsilon);
                if (!(R_max > 0) || !(R_max < 1))
                    throw std::domain_error("no admissible rate");
                cell.lambda_hat = lambda_threshold(R_max, sp.n, sp.epsilon);
                cell.lambda = storage_lambda(sp, st);
                cell.secure = cell.lambda > cell.lambda_hat;
            } catch (const std::exception&) {
                cell.secure = false;
                cell.lambda = -kInf;
                cell.lambda_hat = kInf;
            }
            cells.push_back(cell);
        }
    }
    return cells;
}

void write_region_csv(std::ostream& os, const std::vector<RegionCell>& cells) {
    os << "axis1,axis2,secure,lambda,lambda_hat\n";
    for (const auto& c : cells) {
        os << c.a1 << ',' << c.a2 << ',' << (c.secure ? 1 : 0) << ','
           << c.lambda << ',' << c.lambda_hat << '\n';
    }
}

PipelineReport experiment_pipeline(double epsilon, double n, double p_err,
                                   double p_noclick_h, double p_sent_1, double p_sent_0,
                                   double eps_code, double R, double r_noisy) {
    PipelineReport rep;
    rep.sp = derive_params_for_n(epsilon, n, p_noclick_h);
    rep.sp.p_sent_1 = p_sent_1;
    rep.sp.p_noclick_d = p_sent_0;
    rep.sp.p_err = p_err;
    rep.delta_min = required_distance(n, epsilon, p_err);
    rep.R = R;
    rep.R_max = max_rate(rep.delta_min, n, eps_code);
    rep.lambda_hat = lambda_threshold(R, n, epsilon);
    rep.eps_code = eps_code;
    rep.eps_total = total_error(epsilon, eps_code);
    rep.r_noisy = r_noisy;
    rep.S_bounded = max_tolerable_storage(rep.sp, rep.lambda_hat,
                                          StorageAssumption::Kind::bounded, 1.0);
    rep.S_noisy = max_tolerable_storage(rep.sp, rep.lambda_hat,
                                        StorageAssumption::Kind::depolarizing, r_noisy);
    return rep;
}

} // namespace bcns
