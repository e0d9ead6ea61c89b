#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bcns/codes.hpp"
#include "bcns/estimate.hpp"
#include "bcns/hashing.hpp"
#include "bcns/protocol.hpp"
#include "bcns/security.hpp"
#include "bcns/symmetrize.hpp"
#include "bcns/transport.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace py = pybind11;
using namespace bcns;

namespace {

Axis axis_from_name(const std::string& name) {
    if (name == "p_sent_1") return Axis::p_sent_1;
    if (name == "p_noclick_h") return Axis::p_noclick_h;
    if (name == "p_err") return Axis::p_err;
    if (name == "S") return Axis::S;
    throw std::invalid_argument("unknown axis: " + name);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "bit commitment in the noisy-storage model: channel estimation, "
              "codes, hashing, protocol engines and the security calculus";

    py::class_<ExperimentalParams>(m, "ExperimentalParams")
        .def(py::init<>())
        .def_readwrite("p_sent_0", &ExperimentalParams::p_sent_0)
        .def_readwrite("p_sent_1", &ExperimentalParams::p_sent_1)
        .def_readwrite("p_sent_multi", &ExperimentalParams::p_sent_multi)
        .def_readwrite("p_noclick_h", &ExperimentalParams::p_noclick_h)
        .def_readwrite("p_noclick_d", &ExperimentalParams::p_noclick_d)
        .def_readwrite("p_err", &ExperimentalParams::p_err);

    m.def(
        "estimate_probabilities",
        [](double r_A, double r_B, double r_p, double tau_c, double r_bA, double r_bB,
           double tau_d) {
            SourceRates r;
            r.r_A = r_A;
            r.r_B = r_B;
            r.r_p = r_p;
            r.tau_c = tau_c;
            r.r_bA = r_bA;
            r.r_bB = r_bB;
            r.tau_d = tau_d;
            return estimate_probabilities(r);
        },
        py::arg("r_A"), py::arg("r_B"), py::arg("r_p"), py::arg("tau_c"),
        py::arg("r_bA") = 0.0, py::arg("r_bB") = 0.0, py::arg("tau_d") = 0.0,
        "Per-round channel probabilities from measured rates. p_err stays NaN; "
        "it comes from a separate calibration.");
    m.def("accidental_rate_bound", &accidental_rate_bound, py::arg("r_A"), py::arg("r_B"),
          py::arg("tau_c"));

    m.def(
        "solve_keep_probabilities",
        [](const std::array<std::array<std::uint64_t, 2>, 2>& counts) {
            DetectorCounts dc;
            for (int x = 0; x < 2; ++x)
                for (int th = 0; th < 2; ++th) dc.count[x][th] = counts[x][th];
            KeepMatrix km = solve_keep_probabilities(dc);
            std::array<std::array<double, 2>, 2> t{};
            for (int x = 0; x < 2; ++x)
                for (int th = 0; th < 2; ++th) t[x][th] = km.t[x][th];
            return py::make_tuple(t, km.pr_keep);
        },
        py::arg("counts"), "(t matrix, pr_keep) for a 2x2 click-count table");
    m.def("adjusted_no_click", &adjusted_no_click, py::arg("p_noclick_h"), py::arg("pr_keep"));

    py::class_<LinearCode>(m, "LinearCode")
        .def_property_readonly("n", [](const LinearCode& c) { return c.n; })
        .def_property_readonly("k", [](const LinearCode& c) { return c.k; })
        .def("rate", &LinearCode::rate)
        .def("__repr__", [](const LinearCode& c) {
            return "<LinearCode n=" + std::to_string(c.n) + " k=" + std::to_string(c.k) + ">";
        });
    m.def(
        "generate_code",
        [](std::size_t n, std::size_t k, std::uint64_t seed) {
            Rng rng(seed);
            return generate_parity_check(n, k, rng);
        },
        py::arg("n"), py::arg("k"), py::arg("seed"));
    m.def("save_code", &save_code, py::arg("path"), py::arg("code"));
    m.def("load_code", &load_code, py::arg("path"));
    m.def("code_digest", &code_digest, py::arg("code"));
    m.def(
        "syndrome",
        [](const LinearCode& code, const std::string& x) {
            return syndrome(code, BitVec::parse(x)).to_string();
        },
        py::arg("code"), py::arg("x"));
    m.def("min_distance_bruteforce", &min_distance_bruteforce, py::arg("code"),
          "Exhaustive, n <= 28 only.");
    m.def("gv_failure_bound", &gv_failure_bound, py::arg("R"), py::arg("delta"), py::arg("n"));
    m.def("binary_entropy", &binary_entropy, py::arg("x"));

    m.def(
        "sample_hash_seed",
        [](std::size_t n, std::size_t l, std::uint64_t seed) {
            Rng rng(seed);
            return sample_hash_seed(n, l, rng).bits.to_string();
        },
        py::arg("n"), py::arg("l"), py::arg("seed"));
    m.def(
        "extract",
        [](const std::string& x, const std::string& seed_bits, std::size_t l) {
            HashSeed hs;
            hs.n = x.size();
            hs.l = l;
            hs.bits = BitVec::parse(seed_bits);
            if (hs.bits.size() != hs.n + l - 1)
                throw std::invalid_argument("seed must hold n + l - 1 bits");
            return extract(BitVec::parse(x), hs).to_string();
        },
        py::arg("x"), py::arg("seed_bits"), py::arg("l"));

    py::class_<SecurityParams>(m, "SecurityParams")
        .def(py::init<>())
        .def_readwrite("epsilon", &SecurityParams::epsilon)
        .def_readwrite("M", &SecurityParams::M)
        .def_readwrite("n", &SecurityParams::n)
        .def_readwrite("zeta", &SecurityParams::zeta)
        .def_readwrite("alpha1", &SecurityParams::alpha1)
        .def_readwrite("m", &SecurityParams::m)
        .def_readwrite("alpha2", &SecurityParams::alpha2)
        .def_readwrite("p_sent_1", &SecurityParams::p_sent_1)
        .def_readwrite("p_noclick_h", &SecurityParams::p_noclick_h)
        .def_readwrite("p_noclick_d", &SecurityParams::p_noclick_d)
        .def_readwrite("p_err", &SecurityParams::p_err);

    py::enum_<StorageAssumption::Kind>(m, "StorageKind")
        .value("bounded", StorageAssumption::Kind::bounded)
        .value("depolarizing", StorageAssumption::Kind::depolarizing);
    py::class_<StorageAssumption>(m, "StorageAssumption")
        .def(py::init<>())
        .def_readwrite("kind", &StorageAssumption::kind)
        .def_readwrite("S", &StorageAssumption::S)
        .def_readwrite("r", &StorageAssumption::r);

    py::class_<SecurityVerdict>(m, "SecurityVerdict")
        .def_readonly("secure", &SecurityVerdict::secure)
        .def_readonly("lambda_", &SecurityVerdict::lambda)
        .def_readonly("lambda_hat", &SecurityVerdict::lambda_hat)
        .def_readonly("delta_min", &SecurityVerdict::delta_min)
        .def_readonly("R_max", &SecurityVerdict::R_max)
        .def_readonly("binding_margin", &SecurityVerdict::binding_margin)
        .def_readonly("total_error", &SecurityVerdict::total_error);

    m.def("derive_params", &derive_params, py::arg("epsilon"), py::arg("M"),
          py::arg("p_noclick_h"));
    m.def("derive_params_for_n", &derive_params_for_n, py::arg("epsilon"), py::arg("n"),
          py::arg("p_noclick_h"));
    m.def("g_of_s", &g_of_s, py::arg("s"));
    m.def("uncertainty_min_entropy", &uncertainty_min_entropy, py::arg("n"), py::arg("epsilon"));
    m.def("bounded_storage_rate", &bounded_storage_rate, py::arg("sp"), py::arg("S"));
    m.def("renyi_depolarizing_capacity", &renyi_depolarizing_capacity, py::arg("alpha"),
          py::arg("r"));
    m.def("depolarizing_strong_converse", &depolarizing_strong_converse, py::arg("r"),
          py::arg("R_hat"));
    m.def("required_distance", &required_distance, py::arg("n"), py::arg("epsilon"),
          py::arg("p_err"));
    m.def("max_rate", &max_rate, py::arg("delta"), py::arg("n"), py::arg("eps_code"));
    m.def("lambda_threshold", &lambda_threshold, py::arg("R"), py::arg("n"), py::arg("epsilon"));
    m.def("security_verdict", &security_verdict, py::arg("sp"), py::arg("eps_code"),
          py::arg("storage"));
    m.def("max_tolerable_storage", &max_tolerable_storage, py::arg("sp"), py::arg("lambda_hat"),
          py::arg("kind"), py::arg("r") = 1.0);
    m.def("total_error", &total_error, py::arg("epsilon"), py::arg("eps_code"));

    py::class_<PipelineReport>(m, "PipelineReport")
        .def_readonly("delta_min", &PipelineReport::delta_min)
        .def_readonly("R", &PipelineReport::R)
        .def_readonly("R_max", &PipelineReport::R_max)
        .def_readonly("lambda_hat", &PipelineReport::lambda_hat)
        .def_readonly("eps_code", &PipelineReport::eps_code)
        .def_readonly("eps_total", &PipelineReport::eps_total)
        .def_readonly("S_bounded", &PipelineReport::S_bounded)
        .def_readonly("S_noisy", &PipelineReport::S_noisy)
        .def_readonly("r_noisy", &PipelineReport::r_noisy);
    m.def("experiment_pipeline", &experiment_pipeline, py::arg("epsilon") = 0.99e-5,
          py::arg("n") = 250000.0, py::arg("p_err") = 0.0412, py::arg("p_noclick_h") = 0.909,
          py::arg("p_sent_1") = 0.125, py::arg("p_sent_0") = 0.875, py::arg("eps_code") = 2e-7,
          py::arg("R") = 0.531, py::arg("r_noisy") = 0.9);

    m.def(
        "security_region",
        [](const std::string& axis1, double lo1, double hi1, std::size_t steps1,
           const std::string& axis2, double lo2, double hi2, std::size_t steps2,
           double epsilon, double n, double p_sent_1, double p_noclick_h, double p_noclick_d,
           double p_err, const StorageAssumption& storage) {
            RegionSpec spec;
            spec.axis1 = axis_from_name(axis1);
            spec.lo1 = lo1;
            spec.hi1 = hi1;
            spec.steps1 = steps1;
            spec.axis2 = axis_from_name(axis2);
            spec.lo2 = lo2;
            spec.hi2 = hi2;
            spec.steps2 = steps2;
            RegionFixed fixed;
            fixed.epsilon = epsilon;
            fixed.n = n;
            fixed.p_sent_1 = p_sent_1;
            fixed.p_noclick_h = p_noclick_h;
            fixed.p_noclick_d = p_noclick_d;
            fixed.p_err = p_err;
            fixed.storage = storage;
            auto cells = security_region(spec, fixed);
            py::list out;
            for (const auto& cell : cells)
                out.append(py::make_tuple(cell.a1, cell.a2, cell.secure, cell.lambda,
                                          cell.lambda_hat));
            return out;
        },
        py::arg("axis1"), py::arg("lo1"), py::arg("hi1"), py::arg("steps1"), py::arg("axis2"),
        py::arg("lo2"), py::arg("hi2"), py::arg("steps2"), py::arg("epsilon") = 3e-4,
        py::arg("n") = 250000.0, py::arg("p_sent_1") = 0.125, py::arg("p_noclick_h") = 0.909,
        py::arg("p_noclick_d") = 0.875, py::arg("p_err") = 0.0412,
        py::arg("storage") = StorageAssumption{},
        "Grid of (axis1, axis2, secure, lambda, lambda_hat) tuples.");

    m.def(
        "run_session",
        [](double epsilon, std::size_t n, double p_noclick, double p_err, std::size_t k,
           const std::string& commit, std::uint64_t code_seed, std::uint64_t seed_alice,
           std::uint64_t seed_bob) {
            EngineConfig cfg;
            SecurityParams sp = derive_params_for_n(epsilon, static_cast<double>(n), p_noclick);
            sp.p_sent_1 = 1.0 - p_noclick;
            sp.p_noclick_d = p_noclick;
            sp.p_err = p_err;
            cfg.session.wsee.sp = sp;
            Rng code_rng(code_seed);
            cfg.session.code = generate_parity_check(n, k, code_rng);
            cfg.session.l = commit.size();
            cfg.session.commit_value = BitVec::parse(commit);
            cfg.channel.p_sent_0 = p_noclick;
            cfg.channel.p_sent_1 = 1.0 - p_noclick;
            cfg.channel.p_sent_multi = 0.0;
            cfg.channel.p_noclick_h = p_noclick;
            cfg.channel.p_noclick_d = p_noclick;
            cfg.channel.p_err = p_err;
            cfg.seed_alice = seed_alice;
            cfg.seed_bob = seed_bob;
            PumpResult res = pump_session(cfg);
            py::dict out;
            out["completed"] = res.completed;
            out["accepted"] = res.verdict_bob.accepted;
            out["reason"] = std::string(to_string(res.verdict_bob.reason));
            out["opened"] = res.verdict_bob.opened.to_string();
            out["session_id"] = res.transcript.session_id;
            return out;
        },
        py::arg("epsilon"), py::arg("n"), py::arg("p_noclick"), py::arg("p_err"), py::arg("k"),
        py::arg("commit"), py::arg("code_seed") = 1, py::arg("seed_alice") = 1,
        py::arg("seed_bob") = 2,
        "Honest commit and open over the in-process message pump.");
}
