#include "doctest.h"

#include "bcns/codes.hpp"
#include "bcns/security.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

using namespace bcns;

namespace {

// Independent maximizer for the cross-checks: dense log-spaced grid, then
// ternary refinement on the bracketing cells.
double dense_log_max(const std::function<double(double)>& f, double lo, double hi,
                     std::size_t steps) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    std::vector<double> xs(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        double t = double(i) / double(steps);
        xs[i] = lo * std::pow(hi / lo, t);
        double v = f(xs[i]);
        if (v > best) { best = v; best_i = i; }
    }
    double a = xs[best_i == 0 ? 0 : best_i - 1];
    double b = xs[best_i == steps ? steps : best_i + 1];
    for (int it = 0; it < 300; ++it) {
        double c1 = a + (b - a) / 3, c2 = b - (b - a) / 3;
        if (f(c1) < f(c2)) a = c1; else b = c2;
    }
    return std::max(best, f(0.5 * (a + b)));
}

SecurityParams reference_point() {
    // epsilon large enough that the signal-count lemma is satisfiable at a
    // block length this size
    SecurityParams sp = derive_params_for_n(0.05, 130000, 0.909);
    sp.p_sent_1 = 0.125;
    sp.p_noclick_d = 0.875;
    sp.p_err = 0.001;
    return sp;
}

} // namespace

TEST_CASE("derived finite-size parameters match their closed forms") {
    SecurityParams sp = derive_params(1e-3, 1e6, 0.1);
    CHECK(sp.zeta == doctest::Approx(std::sqrt(std::log(2.0 / 1e-3) / 2e6)).epsilon(1e-14));
    CHECK(sp.n == std::floor((1.0 - 0.1 - sp.zeta) * 1e6));
    CHECK(sp.alpha1 == doctest::Approx(std::sqrt(std::log(1e3) / (2.0 * sp.n))).epsilon(1e-14));
    CHECK(sp.m == std::floor((0.5 - sp.alpha1) * sp.n));
    CHECK(sp.alpha2 == doctest::Approx(std::sqrt(std::log(2e3) / (2.0 * sp.m))).epsilon(1e-14));

    CHECK_THROWS_AS(derive_params(0.0, 1e6, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(1.0, 1e6, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(1e-3, 0.5, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(1e-3, 1e6, 1.5), std::invalid_argument);
    // zeta alone swallows the whole block
    CHECK_THROWS_AS(derive_params(0.5, 10, 0.99), std::invalid_argument);
    // block survives but the test set does not
    CHECK_THROWS_AS(derive_params(1e-9, 50, 0.0), std::invalid_argument);
}

TEST_CASE("block-length inversion lands exactly on the target") {
    SecurityParams sp = derive_params_for_n(0.99e-5, 250000, 0.909);
    CHECK(sp.n == 250000.0);
    CHECK(sp.alpha1 == doctest::Approx(4.800619918473807e-3).epsilon(1e-12));
    CHECK(sp.m == 123799.0);
    CHECK(sp.alpha2 == doctest::Approx(7.02413956189965e-3).epsilon(1e-12));
    // the returned M is consistent with its own zeta
    CHECK(sp.zeta == doctest::Approx(std::sqrt(std::log(2.0 / 0.99e-5) / (2.0 * sp.M))).epsilon(1e-12));
    CHECK(std::floor((1.0 - 0.909 - sp.zeta) * sp.M) == 250000.0);

    for (double target : {1000.0, 4321.0, 99999.0}) {
        SecurityParams q = derive_params_for_n(1e-4, target, 0.3);
        CHECK(q.n == target);
    }
    CHECK_THROWS_AS(derive_params_for_n(1e-4, 0.0, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(derive_params_for_n(1e-4, 1000.0, 1.0), std::invalid_argument);
}

TEST_CASE("interval half-width for the opened block") {
    SecurityParams sp;
    sp.epsilon = 0.99e-5;
    CHECK(alpha3(sp, 4.0) == doctest::Approx(std::sqrt(std::log(1.0 / 0.99e-5) / 4.0)).epsilon(1e-14));
    CHECK_THROWS_AS(alpha3(sp, 0.0), std::invalid_argument);
}

TEST_CASE("entropy rate g") {
    CHECK(g_of_s(1.0) == doctest::Approx(2.0 - std::log2(3.0)).epsilon(1e-14));
    CHECK(g_of_s(1e-9) == doctest::Approx(0.5).epsilon(1e-9));
    // series and direct branches agree across the switch
    CHECK(std::fabs(g_of_s(0.999e-5) - g_of_s(1.001e-5)) < 1e-8);
    // decreasing on (0, 1]
    CHECK(g_of_s(0.2) > g_of_s(0.4));
    CHECK(g_of_s(0.4) > g_of_s(1.0));
    CHECK_THROWS_AS(g_of_s(0.0), std::invalid_argument);
    CHECK_THROWS_AS(g_of_s(-1.0), std::invalid_argument);
}

TEST_CASE("min-entropy optimization matches a dense sweep") {
    struct Case { double n, eps; };
    for (Case c : {Case{1000, 1e-3}, Case{250000, 0.99e-5}, Case{50000, 1e-7}}) {
        double ccoef = 1.0 - 2.0 * std::log2(c.eps);
        auto f = [&](double s) { return g_of_s(s) * c.n - ccoef / s; };
        double oracle = dense_log_max(f, 1e-9, 1.0, 200000);
        double got = uncertainty_min_entropy(c.n, c.eps);
        CHECK(std::fabs(got - oracle) < 1e-6 * (1.0 + std::fabs(oracle)));
    }
    CHECK_THROWS_AS(uncertainty_min_entropy(0.0, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(uncertainty_min_entropy(100.0, 2.0), std::invalid_argument);
}

TEST_CASE("renyi capacities of the depolarizing channel") {
    const double r = 0.9, p = 0.95, q = 0.05;
    CHECK(renyi_depolarizing_capacity(1.0, r) == doctest::Approx(1.0 - binary_entropy(p)).epsilon(1e-12));
    double inf = std::numeric_limits<double>::infinity();
    CHECK(renyi_depolarizing_capacity(inf, r) == doctest::Approx(1.0 + std::log2(p)).epsilon(1e-12));
    CHECK(renyi_depolarizing_capacity(2.0, r) == doctest::Approx(1.0 + std::log2(p * p + q * q)).epsilon(1e-12));
    // continuous at alpha = 1 and increasing in alpha
    CHECK(std::fabs(renyi_depolarizing_capacity(1.0 + 1e-7, r) -
                    renyi_depolarizing_capacity(1.0, r)) < 1e-6);
    CHECK(renyi_depolarizing_capacity(1.0, r) < renyi_depolarizing_capacity(3.0, r));
    CHECK(renyi_depolarizing_capacity(3.0, r) < renyi_depolarizing_capacity(inf, r));
    // noiseless storage keeps a full qubit at every order
    CHECK(renyi_depolarizing_capacity(7.0, 1.0) == 1.0);
    CHECK_THROWS_AS(renyi_depolarizing_capacity(0.5, r), std::invalid_argument);
    CHECK_THROWS_AS(renyi_depolarizing_capacity(2.0, 1.5), std::invalid_argument);
}

TEST_CASE("strong converse exponent") {
    // below capacity nothing is forced out
    CHECK(depolarizing_strong_converse(0.9, 0.0) == 0.0);
    CHECK(depolarizing_strong_converse(0.9, 0.5 * (1.0 - binary_entropy(0.95))) == 0.0);
    // at full rate the alpha -> infinity endpoint is the supremum
    CHECK(depolarizing_strong_converse(0.9, 1.0) == doctest::Approx(-std::log2(0.95)).epsilon(1e-9));
    // r = 1 collapses to max(R_hat - 1, 0)
    CHECK(depolarizing_strong_converse(1.0, 3.0) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(depolarizing_strong_converse(1.0, 0.7) == 0.0);

    for (double R_hat : {0.8, 1.5, 4.0}) {
        auto f = [&](double a) {
            return (a - 1.0) / a * (R_hat - renyi_depolarizing_capacity(a, 0.85));
        };
        double oracle = std::max(dense_log_max(f, 1.0, 1e6, 100000),
                                 R_hat - renyi_depolarizing_capacity(
                                             std::numeric_limits<double>::infinity(), 0.85));
        oracle = std::max(oracle, 0.0);
        double got = depolarizing_strong_converse(0.85, R_hat);
        CHECK(std::fabs(got - oracle) < 1e-6 * (1.0 + std::fabs(oracle)));
    }
}

TEST_CASE("storage rate under a bounded device is linear in the bound") {
    SecurityParams sp = reference_point();
    double l0 = bounded_storage_rate(sp, 0.0);
    double l2 = bounded_storage_rate(sp, 2000.0);
    double m_frac = 1.0 - sp.p_noclick_h - sp.zeta;
    CHECK(l0 > 0.4);
    CHECK(l0 - l2 == doctest::Approx(2000.0 / (sp.M * m_frac)).epsilon(1e-9));
    CHECK(bounded_storage_rate(sp, 0.0) * sp.M * m_frac ==
          doctest::Approx(bounded_entropy_bits(sp, sp.epsilon)).epsilon(1e-12));
    CHECK_THROWS_AS(bounded_storage_rate(sp, -1.0), std::invalid_argument);

    SecurityParams starved = sp;
    starved.p_sent_1 = 0.02;
    CHECK_THROWS_AS(bounded_entropy_bits(starved, starved.epsilon), std::invalid_argument);
}

TEST_CASE("noiseless storage reduces the noisy bound to a subtraction") {
    double expect = 1000.0 - std::log2(1e5) - 500.0;
    CHECK(noisy_storage_entropy(1000.0, 500.0, 1.0, 1e-5, 1e-5) ==
          doctest::Approx(expect).epsilon(1e-9));
    CHECK_THROWS_AS(noisy_storage_entropy(1000.0, 0.5, 1.0, 1e-5, 1e-5), std::invalid_argument);
    CHECK_THROWS_AS(noisy_storage_entropy(1000.0, 500.0, 1.0, 0.0, 1e-5), std::invalid_argument);
}

TEST_CASE("error split maximization matches a dense sweep") {
    SecurityParams sp = reference_point();
    auto H = [&](double ep) { return bounded_entropy_bits(sp, ep); };
    NoisySplit split = noisy_storage_max_split(H, sp.epsilon, 5000.0, 0.9);
    CHECK(split.eps_prime > 0);
    CHECK(split.eps_dprime > 0);
    CHECK(split.eps_prime + split.eps_dprime == doctest::Approx(0.5 * sp.epsilon).epsilon(1e-12));

    double budget = 0.5 * sp.epsilon;
    auto value = [&](double t) {
        double ep = (1.0 - t) * budget;
        double edp = t * budget;
        return noisy_storage_entropy(H(ep), 5000.0, 0.9, ep, edp);
    };
    double oracle = dense_log_max(value, 1e-6, 1.0 - 1e-6, 20000);
    CHECK(std::fabs(split.bits - oracle) < 1e-6 * (1.0 + std::fabs(oracle)));
}

TEST_CASE("distance requirement solves its own fixed point") {
    const double n = 250000, eps = 0.99e-5, p_err = 0.0412;
    double delta = required_distance(n, eps, p_err);
    CHECK(delta > 0.0993);
    CHECK(delta < 0.1003);
    double a1 = std::sqrt(std::log(1.0 / eps) / (2.0 * n));
    double m = std::floor((0.5 - a1) * n);
    double a2 = std::sqrt(std::log(2.0 / eps) / (2.0 * m));
    double a3 = std::sqrt(std::log(1.0 / eps) / (delta * n));
    double rhs = 2.0 * (p_err + a2) * (0.5 - a1) / (0.5 - a3);
    CHECK(delta == doctest::Approx(rhs).epsilon(1e-7));

    // an error-free channel still pays the finite-size terms
    double clean = required_distance(n, eps, 0.0);
    CHECK(clean > 0.0);
    CHECK(clean < delta);

    CHECK_THROWS_AS(required_distance(n, eps, 0.5), std::domain_error);
    CHECK_THROWS_AS(required_distance(0.0, eps, p_err), std::invalid_argument);
    CHECK_THROWS_AS(required_distance(n, eps, 1.5), std::invalid_argument);
}

TEST_CASE("rate ceiling and commitment threshold") {
    CHECK(max_rate(0.1, 250000.0, 2e-7) ==
          doctest::Approx(1.0 - binary_entropy(0.1) - std::log2(5e6) / 250000.0).epsilon(1e-12));
    double delta = required_distance(250000.0, 0.99e-5, 0.0412);
    CHECK(max_rate(delta, 250000.0, 2e-7) >= 0.531);
    CHECK_THROWS_AS(max_rate(0.0, 250000.0, 2e-7), std::invalid_argument);
    CHECK_THROWS_AS(max_rate(0.5, 250000.0, 2e-7), std::invalid_argument);

    CHECK(lambda_threshold(0.531, 250000.0, 0.99e-5) ==
          doctest::Approx(0.469132993120353).epsilon(1e-12));
    CHECK_THROWS_AS(lambda_threshold(1.0, 250000.0, 0.99e-5), std::invalid_argument);
    CHECK_THROWS_AS(lambda_threshold(0.531, 250000.0, 1.0), std::invalid_argument);
}

TEST_CASE("signal-count prerequisites") {
    SecurityParams sp = reference_point();
    StorageAssumption st;
    st.S = 0;
    SignalsRequired s = signals_required(sp, st, 0.01, 2.848e-3);
    CHECK(s.feasible);
    CHECK(s.margin > 0);
    CHECK(s.delta == doctest::Approx(2.0 * (0.001 + 0.01 / std::sqrt(0.98)) /
                                     (1.0 - 4.0 * std::sqrt(5.0) * 0.01)).epsilon(1e-12));
    CHECK(s.lambda_hat == doctest::Approx(binary_entropy(s.delta) + 3e-4).epsilon(1e-12));
    CHECK(s.M1 == doctest::Approx(std::log2(2.0 / 0.05) / (2.0 * 2.848e-3 * 2.848e-3)).epsilon(1e-12));
    CHECK(s.M2 > 0);
    CHECK(s.M3 > 0);
    CHECK(s.M4 == 0);
    // storage enters only through M4
    st.S = 1e4;
    SignalsRequired s2 = signals_required(sp, st, 0.01, 2.848e-3);
    CHECK(s2.M4 == doctest::Approx(1e4 / s2.margin).epsilon(1e-12));
    CHECK(s2.M1 == s.M1);

    CHECK_THROWS_AS(signals_required(sp, st, 0.02, 1e-3), std::invalid_argument);
    CHECK_THROWS_AS(signals_required(sp, st, 1e-3, 0.0), std::invalid_argument);
}

TEST_CASE("full verdict at a workable operating point") {
    SecurityParams sp = reference_point();
    StorageAssumption st;
    st.S = 0;
    SecurityVerdict v = security_verdict(sp, sp.epsilon, st);
    CHECK(v.secure);
    CHECK(v.lambda > v.lambda_hat);
    CHECK(v.binding_margin > 0);
    CHECK(v.delta_min == doctest::Approx(required_distance(130000.0, 0.05, 0.001)).epsilon(1e-12));
    CHECK(v.R_max == doctest::Approx(max_rate(v.delta_min, 130000.0, 0.05)).epsilon(1e-12));
    CHECK(v.lambda_hat == doctest::Approx(lambda_threshold(v.R_max, 130000.0, 0.05)).epsilon(1e-12));
    CHECK(v.lambda == doctest::Approx(bounded_storage_rate(sp, 0.0)).epsilon(1e-12));
    CHECK(v.total_error == doctest::Approx(0.15).epsilon(1e-12));

    // a device the size of the whole string breaks it
    st.S = 1e6;
    SecurityVerdict big = security_verdict(sp, sp.epsilon, st);
    CHECK_FALSE(big.secure);
}

TEST_CASE("tight block lengths fail the signal-count lemma even when the rates clear") {
    SecurityParams sp = derive_params_for_n(0.99e-5, 250000, 0.909);
    sp.p_sent_1 = 0.125;
    sp.p_noclick_d = 0.875;
    sp.p_err = 0.0412;
    StorageAssumption st;
    st.S = 0;
    SecurityVerdict v = security_verdict(sp, 0.99e-5, st);
    CHECK(v.lambda > v.lambda_hat);
    CHECK_FALSE(v.secure);
}

TEST_CASE("largest tolerable device is the threshold crossing") {
    SecurityParams sp = reference_point();
    const double lam_hat = 0.4;
    std::int64_t S_bounded = max_tolerable_storage(sp, lam_hat,
                                                   StorageAssumption::Kind::bounded, 1.0);
    REQUIRE(S_bounded > 0);
    CHECK(bounded_storage_rate(sp, double(S_bounded)) > lam_hat);
    CHECK(bounded_storage_rate(sp, double(S_bounded + 1)) <= lam_hat);

    std::int64_t S_perfect = max_tolerable_storage(sp, lam_hat,
                                                   StorageAssumption::Kind::depolarizing, 1.0);
    std::int64_t S_noisy = max_tolerable_storage(sp, lam_hat,
                                                 StorageAssumption::Kind::depolarizing, 0.9);
    // a perfect device is at least as useful to the adversary, and the noisy
    // accounting pays a split penalty on top
    CHECK(S_perfect < S_bounded);
    CHECK(S_bounded - S_perfect < 200);
    CHECK(S_noisy > S_perfect);

    CHECK(max_tolerable_storage(sp, 10.0, StorageAssumption::Kind::bounded, 1.0) == -1);
    CHECK_THROWS_AS(max_tolerable_storage(sp, -1e10, StorageAssumption::Kind::bounded, 1.0),
                    std::runtime_error);
}

TEST_CASE("error accounting") {
    CHECK(total_error(0.99e-5, 2e-7) == 2.0e-5);
    CHECK_THROWS_AS(total_error(0.0, 2e-7), std::invalid_argument);
    CHECK_THROWS_AS(total_error(1e-5, 1.0), std::invalid_argument);
    ErrorLedger led = error_ledger();
    CHECK(led.correctness_eps == 2);
    CHECK(led.hiding_eps == 2);
    CHECK(led.binding_eps == 2);
    CHECK(led.composed_eps == 3);
    CHECK(led.composed_code_terms == 1);
    CHECK(led.reported_eps == 2);
    CHECK(led.reported_code_terms == 1);
}

TEST_CASE("parameter region scan") {
    RegionSpec spec;
    spec.axis1 = Axis::p_err;
    spec.lo1 = 0.03;
    spec.hi1 = 0.05;
    spec.steps1 = 4;
    spec.axis2 = Axis::S;
    spec.lo2 = 0;
    spec.hi2 = 3000;
    spec.steps2 = 4;
    RegionFixed fixed;
    std::vector<RegionCell> cells = security_region(spec, fixed);
    REQUIRE(cells.size() == 25);

    CHECK(cells[0].a1 == doctest::Approx(0.03));
    CHECK(cells[0].a2 == doctest::Approx(0.0));
    CHECK(cells[24].a1 == doctest::Approx(0.05));
    CHECK(cells[24].a2 == doctest::Approx(3000.0));

    // low error at zero storage is inside the region, p_err = 0.05 is out
    CHECK(cells[0].secure);
    for (std::size_t j = 0; j <= 4; ++j) CHECK_FALSE(cells[20 + j].secure);

    for (const auto& c : cells)
        CHECK(c.secure == (c.lambda > c.lambda_hat));

    // for fixed p_err the secure cells form a prefix in S
    for (std::size_t i = 0; i <= 4; ++i)
        for (std::size_t j = 1; j <= 4; ++j)
            if (cells[i * 5 + j].secure) CHECK(cells[i * 5 + j - 1].secure);

    std::ostringstream os;
    write_region_csv(os, cells);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "axis1,axis2,secure,lambda,lambda_hat");
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 25);
}
