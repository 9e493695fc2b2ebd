#include "qlnc/json_io.hpp"

#include <cstdio>
#include <fstream>

namespace qlnc {

namespace {

uint64_t want_u64(const json& j, const char* what) {
    if (!j.is_number_unsigned() && !j.is_number_integer())
        throw ParseError(std::string(what) + ": expected an integer");
    if (j.is_number_integer() && j.get<int64_t>() < 0)
        throw ParseError(std::string(what) + ": expected a nonnegative integer");
    return j.get<uint64_t>();
}

std::vector<uint64_t> want_u64_array(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string(what) + ": expected an array");
    std::vector<uint64_t> out;
    out.reserve(j.size());
    for (const auto& v : j) out.push_back(want_u64(v, what));
    return out;
}

}  // namespace

json field_to_json(const FieldCtxPtr& cx) {
    json j;
    j["p"] = cx->p();
    j["t"] = cx->t();
    j["alpha"] = cx->alpha();
    j["base_poly"] = cx->base_poly();
    json ext = json::array();
    for (const auto& block : cx->ext_poly()) ext.push_back(block);
    j["ext_poly"] = ext;
    return j;
}

FieldCtxPtr field_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("field: expected an object");
    if (!j.contains("p")) throw ParseError("field: missing \"p\"");
    uint64_t p = want_u64(j.at("p"), "field.p");
    unsigned t = (unsigned)(j.contains("t") ? want_u64(j.at("t"), "field.t") : 1);
    unsigned alpha = (unsigned)(j.contains("alpha") ? want_u64(j.at("alpha"), "field.alpha") : 1);
    bool has_base = j.contains("base_poly");
    bool has_ext = j.contains("ext_poly");
    if (!has_base && !has_ext) return FieldCtx::make(p, t, alpha);

    std::vector<uint64_t> base_poly;
    if (has_base) {
        base_poly = want_u64_array(j.at("base_poly"), "field.base_poly");
    } else {
        auto def = FieldCtx::make(p, t, 1);
        base_poly = def->base_poly();
    }
    std::vector<std::vector<uint64_t>> ext_poly;
    if (has_ext) {
        const json& ej = j.at("ext_poly");
        if (!ej.is_array()) throw ParseError("field.ext_poly: expected an array");
        for (const auto& entry : ej) {
            if (entry.is_array())
                ext_poly.push_back(want_u64_array(entry, "field.ext_poly"));
            else
                ext_poly.push_back(
                    std::vector<uint64_t>{want_u64(entry, "field.ext_poly")});
        }
    } else {
        auto def = FieldCtx::make(p, t, alpha, base_poly, {});
        ext_poly = def->ext_poly();
    }
    return FieldCtx::make(p, t, alpha, std::move(base_poly), std::move(ext_poly));
}

json elem_to_json(const FieldCtxPtr& cx, const FieldElem& x) {
    if (cx->width(x.level) == 1) return x.c[0];
    return json(x.c);
}

FieldElem elem_from_json(const FieldCtxPtr& cx, Level lv, const json& j) {
    if (j.is_array()) {
        auto coeffs = want_u64_array(j, "matrix entry");
        if (coeffs.size() != cx->width(lv))
            throw ParseError("matrix entry: expected " + std::to_string(cx->width(lv)) +
                             " coordinates");
        return cx->from_coeffs(lv, std::move(coeffs));
    }
    uint64_t v = want_u64(j, "matrix entry");
    std::vector<uint64_t> coeffs(cx->width(lv), 0);
    coeffs[0] = v;
    return cx->from_coeffs(lv, std::move(coeffs));
}

json mat_to_json(const Mat& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < M.cols(); ++j) row.push_back(elem_to_json(M.ctx(), M.el(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const FieldCtxPtr& cx, Level lv, const json& j) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw ParseError("matrix: expected a nonempty array of rows");
    int rows = (int)j.size();
    int cols = (int)j.front().size();
    Mat M(cx, lv, rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if ((int)row.size() != cols) throw ParseError("matrix: ragged rows");
        for (int k = 0; k < cols; ++k) M.el(i, k) = elem_from_json(cx, lv, row.at(k));
    }
    return M;
}

json network_to_json(const NetworkSpec& spec) {
    json j;
    j["field"] = field_to_json(spec.ctx);
    j["pairs"] = spec.pair_sizes;
    json nodes = json::array();
    for (const auto& node : spec.nodes) {
        json nj;
        nj["wires"] = node.wires;
        nj["matrix"] = mat_to_json(node.matrix);
        nodes.push_back(std::move(nj));
    }
    j["nodes"] = std::move(nodes);
    return j;
}

NetworkSpec network_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("network: expected an object");
    NetworkSpec spec;
    spec.ctx = j.contains("field") ? field_from_json(j.at("field")) : FieldCtx::make(2, 1, 1);
    if (!j.contains("pairs")) throw ParseError("network: missing \"pairs\"");
    for (uint64_t m : want_u64_array(j.at("pairs"), "network.pairs"))
        spec.pair_sizes.push_back((int)m);

    if (j.contains("transfer")) {
        if (j.contains("nodes")) throw ParseError("network: give \"nodes\" or \"transfer\", not both");
        NodeOp node;
        node.matrix = mat_from_json(spec.ctx, Level::base, j.at("transfer"));
        for (int w = 0; w < node.matrix.rows(); ++w) node.wires.push_back(w);
        spec.nodes.push_back(std::move(node));
    } else if (j.contains("nodes")) {
        const json& nodes = j.at("nodes");
        if (!nodes.is_array()) throw ParseError("network.nodes: expected an array");
        for (const auto& nj : nodes) {
            if (!nj.is_object() || !nj.contains("wires") || !nj.contains("matrix"))
                throw ParseError("network node: expected {\"wires\", \"matrix\"}");
            NodeOp node;
            for (uint64_t w : want_u64_array(nj.at("wires"), "node.wires"))
                node.wires.push_back((int)w);
            node.matrix = mat_from_json(spec.ctx, Level::base, nj.at("matrix"));
            spec.nodes.push_back(std::move(node));
        }
    } else {
        throw ParseError("network: missing \"nodes\" (or \"transfer\")");
    }
    try {
        spec.validate();
    } catch (const Error& e) {
        throw ParseError(std::string("network: ") + e.what());
    }
    return spec;
}

NetworkSpec load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return network_from_json(j);
}

json config_to_json(const CodeConfig& cfg) {
    json j;
    j["pair"] = cfg.pair_index;
    j["m"] = cfg.m;
    j["a"] = cfg.a;
    j["a_phase"] = cfg.a_phase;
    j["n"] = cfg.n;
    j["alpha"] = cfg.alpha;
    j["n_prime"] = cfg.n_prime;
    return j;
}

namespace {

/// q' printed exactly when it fits a u64, "p^e" form otherwise.
std::string qprime_string(const FieldCtxPtr& cx) {
    if (cx->size_fits_u64(Level::ext)) return std::to_string(cx->size_u64(Level::ext));
    return std::to_string(cx->p()) + "^" + std::to_string((uint64_t)cx->t() * cx->alpha());
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

json gamma_to_json(const GammaStats& g) {
    json j;
    j["g1"] = g.g1;
    j["g2"] = g.g2;
    j["g2prime"] = g.g2prime;
    j["g3"] = g.g3;
    j["all"] = g.all;
    return j;
}

}  // namespace

json report_to_json(const FieldCtxPtr& cx, const CodeConfig& cfg, const TrialReport& r) {
    json j;
    j["q_prime"] = qprime_string(cx);
    j["n_prime"] = cfg.n_prime;
    j["config"] = config_to_json(cfg);
    j["trials"] = r.trials;
    j["bit_failures"] = r.bit_failures;
    j["phase_failures"] = r.phase_failures;
    j["p_bit"] = r.p_bit;
    j["p_phase"] = r.p_phase;
    j["fidelity_lower_bound"] = r.fidelity_lower_bound;
    j["gamma_bit"] = gamma_to_json(r.gamma_bit);
    j["gamma_phase"] = gamma_to_json(r.gamma_phase);
    j["bit_implication_violations"] = r.bit_implication_violations;
    j["phase_implication_violations"] = r.phase_implication_violations;
    j["implication_violations"] = r.implication_violations;
    j["bit_e2_mismatches"] = r.bit_e2_mismatches;
    j["phase_e2_mismatches"] = r.phase_e2_mismatches;
    j["bit_solver_failures"] = r.bit_solver_failures;
    j["phase_solver_failures"] = r.phase_solver_failures;
    j["warn_a"] = r.warn_a;
    j["warn_aphase"] = r.warn_aphase;
    return j;
}

std::string report_csv_header() {
    return "q_prime,n_prime,trials,bit_failures,phase_failures,fidelity_lower_bound,violations";
}

std::string report_csv_row(const FieldCtxPtr& cx, const CodeConfig& cfg, const TrialReport& r) {
    std::string row = qprime_string(cx);
    row += "," + std::to_string(cfg.n_prime);
    row += "," + std::to_string(r.trials);
    row += "," + std::to_string(r.bit_failures);
    row += "," + std::to_string(r.phase_failures);
    row += "," + fixed6(r.fidelity_lower_bound);
    row += "," + std::to_string(r.implication_violations);
    return row;
}

std::string solve_status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::ok: return "ok";
        case SolveStatus::inconsistent: return "inconsistent";
        case SolveStatus::cannot_complete: return "cannot_complete";
    }
    return "unknown";
}

namespace {

json outcome_to_json(const DecodeOutcome& outcome) {
    json j;
    j["status"] = solve_status_name(outcome.status);
    if (outcome.ok()) {
        j["m_hat"] = mat_to_json(outcome.m_hat);
        j["e2_hat"] = mat_to_json(outcome.e2_hat);
    }
    return j;
}

json randomness_to_json(const FieldCtxPtr& cx, const CodeRandomness& rnd) {
    json j;
    j["R1"] = mat_to_json(rnd.R1);
    j["R2"] = mat_to_json(rnd.R2);
    json v = json::array();
    for (const auto& x : rnd.V) v.push_back(elem_to_json(cx, x));
    j["V"] = std::move(v);
    j["U1"] = mat_to_json(rnd.U1);
    return j;
}

template <class Branch>
json vector_json(uint64_t seed, const FieldCtxPtr& cx, const CodeConfig& cfg,
                 const CodeRandomness& rnd, const Branch& branch, const char* kind,
                 const Mat& codeword, const DecodeOutcome& outcome) {
    json j;
    j["seed"] = seed;
    j["field"] = field_to_json(cx);
    j["cfg"] = config_to_json(cfg);
    j["randomness"] = randomness_to_json(cx, rnd);
    json b;
    b["kind"] = kind;
    b["M"] = mat_to_json(branch.M);
    b["E1"] = mat_to_json(branch.E1);
    b["E2"] = mat_to_json(branch.E2);
    j["branch"] = std::move(b);
    j["codeword"] = mat_to_json(codeword);
    j["outcome"] = outcome_to_json(outcome);
    return j;
}

}  // namespace

json codec_vector_json(uint64_t seed, const FieldCtxPtr& cx, const CodeConfig& cfg,
                       const CodeRandomness& rnd, const BitBranch& branch, const Mat& codeword,
                       const DecodeOutcome& outcome) {
    return vector_json(seed, cx, cfg, rnd, branch, "bit", codeword, outcome);
}

json codec_vector_json(uint64_t seed, const FieldCtxPtr& cx, const CodeConfig& cfg,
                       const CodeRandomness& rnd, const PhaseBranch& branch, const Mat& codeword,
                       const DecodeOutcome& outcome) {
    return vector_json(seed, cx, cfg, rnd, branch, "phase", codeword, outcome);
}

}  // namespace qlnc
