#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlnc/json_io.hpp"
#include "qlnc/oracle.hpp"
#include "qlnc/schedule.hpp"

namespace py = pybind11;
using namespace qlnc;

namespace {

Level level_of(const std::string& name) {
    if (name == "prime") return Level::prime;
    if (name == "base") return Level::base;
    if (name == "ext") return Level::ext;
    throw ConfigInvalid("level must be prime, base or ext");
}

py::object to_py(const json& j) {
    return py::module_::import("json").attr("loads")(py::str(j.dump()));
}

std::pair<uint64_t, unsigned> factor_prime_power(uint64_t q) {
    if (q < 2) throw ConfigInvalid("q must be at least 2");
    uint64_t p = q;
    for (uint64_t d = 2; d * d <= q && d < (1u << 20); ++d)
        if (q % d == 0) {
            p = d;
            break;
        }
    unsigned t = 0;
    uint64_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++t;
    }
    if (rest != 1) throw ConfigInvalid("q is not a prime power");
    return {p, t};
}

/// Index-based facade over the field tower: elements are their enumeration
/// indices, so scripts never touch coordinate vectors.
struct PyField {
    FieldCtxPtr cx;

    PyField(uint64_t p, unsigned t, unsigned alpha) : cx(FieldCtx::make(p, t, alpha)) {}

    uint64_t order(const std::string& lv) const { return cx->size_u64(level_of(lv)); }

    uint64_t add(uint64_t a, uint64_t b, const std::string& lv) const {
        Level l = level_of(lv);
        return cx->index_of(cx->add(cx->from_index(l, a), cx->from_index(l, b)));
    }
    uint64_t mul(uint64_t a, uint64_t b, const std::string& lv) const {
        Level l = level_of(lv);
        return cx->index_of(cx->mul(cx->from_index(l, a), cx->from_index(l, b)));
    }
    uint64_t inv(uint64_t a, const std::string& lv) const {
        Level l = level_of(lv);
        return cx->index_of(cx->inv(cx->from_index(l, a)));
    }
    uint64_t pow(uint64_t a, uint64_t e, const std::string& lv) const {
        Level l = level_of(lv);
        return cx->index_of(cx->pow(cx->from_index(l, a), e));
    }
    uint64_t trace(uint64_t a) const {
        return cx->index_of(cx->trace(cx->from_index(Level::base, a)));
    }
};

struct PyNetwork {
    NetworkSpec spec;

    std::vector<int> pairs() const { return spec.pair_sizes; }

    py::object rates() const {
        auto rows = rate_table(compose_transfer(spec), spec.pair_sizes);
        json out = json::array();
        for (size_t i = 0; i < rows.size(); ++i) {
            json r;
            r["pair"] = i + 1;
            r["m"] = rows[i].m_i;
            r["rank_kii"] = rows[i].rank_kii;
            r["rank_ktii"] = rows[i].rank_ktii;
            r["rank_kic"] = rows[i].rank_kic;
            r["rank_ktic"] = rows[i].rank_ktic;
            r["ok"] = rows[i].ok;
            out.push_back(std::move(r));
        }
        return to_py(out);
    }

    py::object transfer() const {
        TransferPair tp = compose_transfer(spec);
        json out;
        out["K"] = mat_to_json(tp.K);
        out["K_phase"] = mat_to_json(tp.K_phase);
        return to_py(out);
    }

    py::object describe() const { return to_py(network_to_json(spec)); }
};

PyNetwork network_example(const std::string& name) { return PyNetwork{builtin_example(name)}; }

PyNetwork network_load(const std::string& path) { return PyNetwork{load_network(path)}; }

PyNetwork network_parse(const std::string& text) {
    return PyNetwork{network_from_json(json::parse(text))};
}

py::object simulate(const PyNetwork& net, int pair, int a, int aphase, int64_t n,
                    const std::string& alpha, int64_t trials, uint64_t seed,
                    const std::string& interference, int jobs) {
    const NetworkSpec& spec = net.spec;
    if (pair < 1 || pair > spec.pair_count()) throw ConfigInvalid("pair out of range");
    int m = spec.pair_sizes[pair - 1];

    int64_t a_deg;
    int64_t n_eff = n;
    if (alpha == "auto") {
        QPrimeChoice qc = choose_qprime(n, spec.ctx->size_u64(Level::base), m, a, aphase);
        a_deg = qc.alpha;
        n_eff = qc.n_eff;
    } else {
        a_deg = std::stoll(alpha);
    }

    TrialConfig tc;
    tc.cfg = CodeConfig::make(pair - 1, m, a, aphase, n_eff, (int)a_deg);
    auto cx = spec.ctx->with_alpha((unsigned)a_deg);
    tc.transfer = compose_transfer(spec.with_ctx(cx));
    tc.pair_sizes = spec.pair_sizes;
    tc.trials = trials;
    tc.master_seed = seed;
    tc.jobs = jobs;
    if (interference == "zero")
        tc.mode = InterferenceMode::zero;
    else if (interference == "uniform")
        tc.mode = InterferenceMode::uniform;
    else
        throw ConfigInvalid("interference must be zero or uniform");

    return to_py(report_to_json(cx, tc.cfg, estimate(tc)));
}

bool mixer_roundtrip(uint64_t p, unsigned t, unsigned alpha, int m, int64_t n_prime,
                     uint64_t seed) {
    auto cx = FieldCtx::make(p, t, alpha);
    CodeConfig cfg = CodeConfig::make(0, m, 0, 0, n_prime * alpha, (int)alpha);
    Rng rng(seed);
    std::vector<FieldElem> V;
    for (int k = 0; k < 4 * m; ++k) V.push_back(cx->sample(Level::ext, rng));
    Mat prod = mat_mul(build_u2(cx, V, cfg), build_u2_inv(cx, V, cfg));
    return prod == Mat::identity(cx, Level::ext, (int)n_prime);
}

bool codec_roundtrip(uint64_t p, unsigned alpha, int m, int a, int aphase, int64_t n_prime,
                     uint64_t seed) {
    auto cx = FieldCtx::make(p, 1, alpha);
    CodeConfig cfg = CodeConfig::make(0, m, a, aphase, n_prime * alpha, (int)alpha);
    Rng rng(seed);
    CodeRandomness rnd = sample_randomness(cx, cfg, rng);
    BitBranch bb = sample_bit_branch(cx, cfg, rng);
    DecodeOutcome bit = decode_bit(encode_bit(bb, rnd, cfg), rnd.R1, rnd.V, cfg);
    PhaseBranch pb = sample_phase_branch(cx, cfg, rng);
    DecodeOutcome phase = decode_phase(encode_phase(pb, rnd, cfg), rnd.R2, rnd.V, cfg);
    return bit.ok() && bit.m_hat == bb.M && phase.ok() && phase.m_hat == pb.M;
}

py::object py_choose_qprime(int64_t n, uint64_t q, int m, int a, int aphase) {
    QPrimeChoice qc = choose_qprime(n, q, m, a, aphase);
    json j;
    j["alpha"] = qc.alpha;
    j["n_eff"] = qc.n_eff;
    j["n_prime"] = qc.n_prime;
    j["padded"] = qc.padded;
    j["small_nprime"] = qc.small_nprime;
    return to_py(j);
}

py::object py_theorem2_params(uint64_t n, uint64_t q, int m, int a, int aphase) {
    ScheduleParams sp = theorem2_params(n, q, m, a, aphase);
    json j;
    j["beta"] = sp.beta;
    j["alpha"] = sp.alpha;
    j["k"] = sp.k;
    j["n1"] = sp.n1;
    j["q1"] = sp.q1;
    j["q2"] = sp.q2;
    j["q_overflow"] = sp.q_overflow;
    j["p_err_bound"] = sp.p_err_bound;
    j["overhead"] = sp.overhead;
    return to_py(j);
}

py::tuple clearance_experiment(uint64_t q, int da, int db, int dc, int64_t trials,
                               bool exhaustive, uint64_t seed) {
    auto [p, t] = factor_prime_power(q);
    auto cx = FieldCtx::make(p, t, 1);
    FractionResult r =
        subspace_clearance_experiment(cx, Level::base, da, db, dc, trials, exhaustive, seed);
    return py::make_tuple(r.hits, r.total);
}

py::tuple full_rank_frequency(uint64_t q, int d, int dprime, int64_t trials, bool exhaustive,
                              uint64_t seed) {
    auto [p, t] = factor_prime_power(q);
    auto cx = FieldCtx::make(p, t, 1);
    FractionResult r = full_rank_experiment(cx, Level::base, d, dprime, trials, exhaustive, seed);
    return py::make_tuple(r.hits, r.total);
}

double vanish_rate(uint64_t q, int m, int64_t n_prime, int64_t v_draws, int64_t x_draws,
                   uint64_t seed) {
    auto [p, t] = factor_prime_power(q);
    auto cx = FieldCtx::make(p, t, 1);
    return mixer_vanish_experiment(cx, m, n_prime, v_draws, x_draws, seed).max_rate;
}

py::tuple py_verify_lemma1(uint64_t q, int m, int n) {
    auto [p, t] = factor_prime_power(q);
    OracleCheck c = verify_lemma1(FieldCtx::make(p, t, 1), m, n);
    return py::make_tuple(c.ok, c.detail);
}

py::tuple py_verify_shadow(const PyNetwork& net, int n) {
    OracleCheck c = verify_shadow(net.spec, n);
    return py::make_tuple(c.ok, c.detail);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "multiple-unicast linear network code toolkit";

    py::class_<PyField>(mod, "Field")
        .def(py::init<uint64_t, unsigned, unsigned>(), py::arg("p"), py::arg("t") = 1,
             py::arg("alpha") = 1)
        .def_property_readonly("p", [](const PyField& f) { return f.cx->p(); })
        .def_property_readonly("t", [](const PyField& f) { return f.cx->t(); })
        .def_property_readonly("alpha", [](const PyField& f) { return f.cx->alpha(); })
        .def("order", &PyField::order, py::arg("level") = "ext")
        .def("add", &PyField::add, py::arg("a"), py::arg("b"), py::arg("level") = "ext")
        .def("mul", &PyField::mul, py::arg("a"), py::arg("b"), py::arg("level") = "ext")
        .def("inv", &PyField::inv, py::arg("a"), py::arg("level") = "ext")
        .def("pow", &PyField::pow, py::arg("a"), py::arg("e"), py::arg("level") = "ext")
        .def("trace", &PyField::trace, py::arg("a"));

    py::class_<PyNetwork>(mod, "Network")
        .def_property_readonly("pairs", &PyNetwork::pairs)
        .def("rates", &PyNetwork::rates)
        .def("transfer", &PyNetwork::transfer)
        .def("describe", &PyNetwork::describe);

    mod.def("example", &network_example, py::arg("name"));
    mod.def("load_network", &network_load, py::arg("path"));
    mod.def("parse_network", &network_parse, py::arg("text"));

    mod.def("simulate", &simulate, py::arg("network"), py::arg("pair"), py::arg("a"),
            py::arg("aphase"), py::arg("n"), py::arg("alpha") = "auto", py::arg("trials") = 1000,
            py::arg("seed") = 1, py::arg("interference") = "uniform", py::arg("jobs") = 1);

    mod.def("mixer_roundtrip", &mixer_roundtrip, py::arg("p"), py::arg("t"), py::arg("alpha"),
            py::arg("m"), py::arg("n_prime"), py::arg("seed") = 1);
    mod.def("codec_roundtrip", &codec_roundtrip, py::arg("p"), py::arg("alpha"), py::arg("m"),
            py::arg("a"), py::arg("aphase"), py::arg("n_prime"), py::arg("seed") = 1);

    mod.def("choose_qprime", &py_choose_qprime, py::arg("n"), py::arg("q"), py::arg("m"),
            py::arg("a"), py::arg("aphase"));
    mod.def("theorem2_params", &py_theorem2_params, py::arg("n"), py::arg("q"), py::arg("m"),
            py::arg("a"), py::arg("aphase"));

    mod.def("clearance_experiment", &clearance_experiment, py::arg("q"), py::arg("da"),
            py::arg("db"), py::arg("dc"), py::arg("trials") = 0, py::arg("exhaustive") = true,
            py::arg("seed") = 0);
    mod.def("full_rank_frequency", &full_rank_frequency, py::arg("q"), py::arg("d"),
            py::arg("dprime"), py::arg("trials") = 0, py::arg("exhaustive") = true,
            py::arg("seed") = 0);
    mod.def("vanish_rate", &vanish_rate, py::arg("q"), py::arg("m"), py::arg("n_prime"),
            py::arg("v_draws") = 200, py::arg("x_draws") = 20, py::arg("seed") = 0);

    mod.def("verify_lemma1", &py_verify_lemma1, py::arg("q"), py::arg("m"), py::arg("n"));
    mod.def("verify_shadow", &py_verify_shadow, py::arg("network"), py::arg("n"));
}
