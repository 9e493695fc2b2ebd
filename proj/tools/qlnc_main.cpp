#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "qlnc/json_io.hpp"
#include "qlnc/oracle.hpp"
#include "qlnc/schedule.hpp"

using namespace qlnc;

namespace {

// exit code contract: 0 clean, 1 property violation, 2 usage/parse error
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct PrimePower {
    uint64_t p;
    unsigned t;
};

PrimePower factor_prime_power(uint64_t q) {
    if (q < 2) throw ConfigInvalid("q must be at least 2");
    uint64_t p = q;
    for (uint64_t d = 2; d * d <= q && d < (1u << 20); ++d) {
        if (q % d == 0) {
            p = d;
            break;
        }
    }
    unsigned t = 0;
    uint64_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++t;
    }
    if (rest != 1) throw ConfigInvalid("q = " + std::to_string(q) + " is not a prime power");
    return {p, t};  // p prime is re-checked by the field context
}

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << body;
}

/// Every file output gets a sidecar <out>.manifest.json capturing the exact
/// inputs that produced it.
void write_manifest(const std::string& out_path, json manifest) {
    manifest["out"] = out_path;
    write_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

struct NetworkArgs {
    std::string file;
    std::string example;

    void attach(CLI::App* cmd) {
        auto* f = cmd->add_option("--network", file, "network JSON file");
        auto* e = cmd->add_option("--example", example, "built-in network: butterfly, two_way");
        f->excludes(e);
    }

    NetworkSpec resolve() const {
        if (!example.empty()) return builtin_example(example);
        if (!file.empty()) return load_network(file);
        throw ConfigInvalid("give --network or --example");
    }

    json describe() const {
        json j;
        if (!example.empty())
            j["example"] = example;
        else
            j["network"] = file;
        return j;
    }
};

int cmd_rates(const NetworkArgs& net, const std::string& out_path) {
    NetworkSpec spec = net.resolve();
    TransferPair tp = compose_transfer(spec);
    auto rows = rate_table(tp, spec.pair_sizes);

    json jrows = json::array();
    bool all_ok = true;
    for (size_t i = 0; i < rows.size(); ++i) {
        const RateRow& r = rows[i];
        std::printf("pair %zu: %d %d %d %d %d\n", i + 1, r.m_i, r.rank_kii, r.rank_ktii,
                    r.rank_kic, r.rank_ktic);
        json jr;
        jr["pair"] = i + 1;
        jr["m"] = r.m_i;
        jr["rank_kii"] = r.rank_kii;
        jr["rank_ktii"] = r.rank_ktii;
        jr["rank_kic"] = r.rank_kic;
        jr["rank_ktic"] = r.rank_ktic;
        jr["ok"] = r.ok;
        jrows.push_back(std::move(jr));
        all_ok = all_ok && r.rank_kii == r.m_i;
    }

    if (!out_path.empty()) {
        json payload;
        payload["field"] = field_to_json(spec.ctx);
        payload["rates"] = jrows;
        write_file(out_path, payload.dump(2) + "\n");
        json manifest = net.describe();
        manifest["command"] = "rates";
        write_manifest(out_path, std::move(manifest));
    }
    if (!all_ok) std::printf("rank-deficient pair block\n");
    return all_ok ? kOk : kViolation;
}

Mat load_fixed_z(const std::string& path, const FieldCtxPtr& cx) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    if (j.is_object() && j.contains("matrix")) return mat_from_json(cx, Level::ext, j.at("matrix"));
    return mat_from_json(cx, Level::ext, j);
}

int cmd_simulate(const NetworkArgs& net, int pair, int a, int aphase, int64_t n,
                 const std::string& alpha_arg, int64_t trials, uint64_t seed,
                 const std::string& interference, int jobs, const std::string& out_path,
                 const std::string& format) {
    NetworkSpec spec = net.resolve();
    if (pair < 1 || pair > spec.pair_count()) throw ConfigInvalid("--pair out of range");
    int m = spec.pair_sizes[pair - 1];
    uint64_t q = spec.ctx->size_u64(Level::base);

    int64_t alpha;
    bool padded = false;
    int64_t n_eff = n;
    if (alpha_arg == "auto") {
        QPrimeChoice qc = choose_qprime(n, q, m, a, aphase);
        alpha = qc.alpha;
        n_eff = qc.n_eff;
        padded = qc.padded;
    } else {
        alpha = std::stoll(alpha_arg);
    }

    TrialConfig tc;
    tc.cfg = CodeConfig::make(pair - 1, m, a, aphase, n_eff, (int)alpha);
    auto cx = spec.ctx->with_alpha((unsigned)alpha);
    NetworkSpec spec_a = spec.with_ctx(cx);
    tc.transfer = compose_transfer(spec_a);
    tc.pair_sizes = spec.pair_sizes;
    tc.trials = trials;
    tc.master_seed = seed;
    tc.jobs = jobs;
    if (interference == "zero") {
        tc.mode = InterferenceMode::zero;
    } else if (interference == "uniform") {
        tc.mode = InterferenceMode::uniform;
    } else if (interference.rfind("fixed:", 0) == 0) {
        tc.mode = InterferenceMode::fixed;
        tc.fixed_z = load_fixed_z(interference.substr(6), cx);
    } else {
        throw ConfigInvalid("--interference must be zero, uniform or fixed:PATH");
    }

    TrialReport report = estimate(tc);

    std::string body;
    if (format == "json") {
        body = report_to_json(cx, tc.cfg, report).dump(2) + "\n";
    } else {
        body = report_csv_header() + "\n" + report_csv_row(cx, tc.cfg, report) + "\n";
    }
    std::fputs(body.c_str(), stdout);

    if (!out_path.empty()) {
        write_file(out_path, body);
        json manifest = net.describe();
        manifest["command"] = "simulate";
        manifest["pair"] = pair;
        manifest["a"] = a;
        manifest["aphase"] = aphase;
        manifest["n"] = n;
        manifest["n_eff"] = n_eff;
        manifest["padded"] = padded;
        manifest["alpha"] = alpha;
        manifest["trials"] = trials;
        manifest["seed"] = seed;
        manifest["interference"] = interference;
        manifest["jobs"] = jobs;
        manifest["format"] = format;
        write_manifest(out_path, std::move(manifest));
    }
    return report.implication_violations == 0 ? kOk : kViolation;
}

int cmd_params(const std::string& mode, int64_t n, uint64_t q, int m, int a, int aphase,
               const std::string& out_path) {
    json j;
    j["mode"] = mode;
    j["n"] = n;
    j["q"] = q;
    j["m"] = m;
    j["a"] = a;
    j["aphase"] = aphase;
    if (mode == "qprime") {
        QPrimeChoice qc = choose_qprime(n, q, m, a, aphase);
        j["alpha"] = qc.alpha;
        j["n_eff"] = qc.n_eff;
        j["n_prime"] = qc.n_prime;
        j["padded"] = qc.padded;
        j["small_nprime"] = qc.small_nprime;
    } else if (mode == "theorem2") {
        ScheduleParams sp = theorem2_params((uint64_t)n, q, m, a, aphase);
        j["beta"] = sp.beta;
        j["alpha"] = sp.alpha;
        j["k"] = sp.k;
        j["n1"] = sp.n1;
        j["q1"] = sp.q1;
        j["q2"] = sp.q2;
        j["q_overflow"] = sp.q_overflow;
        j["p_err_bound"] = sp.p_err_bound;
        j["overhead"] = sp.overhead;
    } else {
        throw ConfigInvalid("--mode must be qprime or theorem2");
    }
    std::string body = j.dump(2) + "\n";
    std::fputs(body.c_str(), stdout);
    if (!out_path.empty()) {
        write_file(out_path, body);
        json manifest;
        manifest["command"] = "params";
        manifest["mode"] = mode;
        manifest["n"] = n;
        manifest["q"] = q;
        manifest["m"] = m;
        manifest["a"] = a;
        manifest["aphase"] = aphase;
        write_manifest(out_path, std::move(manifest));
    }
    return kOk;
}

int cmd_oracle(uint64_t q, int m, int n, const std::string& suite, const NetworkArgs& net,
               uint64_t seed) {
    bool all_ok = true;
    if (suite == "lemma1" || suite == "all") {
        PrimePower pp = factor_prime_power(q);
        auto cx = FieldCtx::make(pp.p, pp.t, 1);
        OracleCheck c = verify_lemma1(cx, m, n);
        std::printf("lemma1 q=%llu m=%d n=%d: %s%s%s\n", (unsigned long long)q, m, n,
                    c.ok ? "pass" : "FAIL", c.ok ? "" : " ", c.detail.c_str());
        all_ok = all_ok && c.ok;
    }
    if (suite == "shadow" || suite == "all") {
        NetworkSpec spec;
        if (!net.example.empty() || !net.file.empty()) {
            spec = net.resolve();
        } else {
            // one random invertible node across all m wires
            PrimePower pp = factor_prime_power(q);
            spec.ctx = FieldCtx::make(pp.p, pp.t, 1);
            spec.pair_sizes = {m};
            Rng rng(seed);
            NodeOp node;
            for (int w = 0; w < m; ++w) node.wires.push_back(w);
            node.matrix = sample_invertible(spec.ctx, Level::base, m, rng);
            spec.nodes.push_back(std::move(node));
        }
        OracleCheck c = verify_shadow(spec, n);
        std::printf("shadow wires=%d n=%d: %s%s%s\n", spec.total_wires(), n,
                    c.ok ? "pass" : "FAIL", c.ok ? "" : " ", c.detail.c_str());
        all_ok = all_ok && c.ok;
    }
    return all_ok ? kOk : kViolation;
}

int cmd_lemmas(int which, int da, int db, int dc, int d, int dprime, int m, int64_t nprime,
               uint64_t q, bool exhaustive, int64_t trials, int64_t xsamples, uint64_t seed,
               const std::string& out_path) {
    PrimePower pp = factor_prime_power(q);
    double qd = (double)q;
    std::string dims;
    double empirical = 0, bound = 0;
    bool lower_bound = true;  // whether empirical must sit above the bound
    int64_t used_trials = trials;

    if (which == 3) {
        auto cx = FieldCtx::make(pp.p, pp.t, 1);
        FractionResult fr =
            subspace_clearance_experiment(cx, Level::base, da, db, dc, trials, exhaustive, seed);
        dims = std::to_string(da) + "/" + std::to_string(db) + "/" + std::to_string(dc);
        empirical = fr.fraction();
        bound = 1.0 - kSubspaceClearanceSlack * std::pow(qd, db + dc - da - 1);
        lower_bound = true;
        used_trials = fr.total;
    } else if (which == 4) {
        auto cx = FieldCtx::make(pp.p, pp.t, 1);
        FractionResult fr = full_rank_experiment(cx, Level::base, d, dprime, trials, exhaustive, seed);
        dims = std::to_string(d) + "/" + std::to_string(dprime);
        empirical = fr.fraction();
        bound = 1.0 - kFullRankSlack / qd;
        lower_bound = true;
        used_trials = fr.total;
    } else if (which == 5) {
        auto cx = FieldCtx::make(pp.p, pp.t, 1);
        VanishResult vr = mixer_vanish_experiment(cx, m, nprime, trials, xsamples, seed);
        dims = std::to_string(m) + "/" + std::to_string(nprime);
        empirical = vr.max_rate;
        bound = kMixerVanishSlack * std::pow((double)(nprime - 2 * m) / qd, m);
        lower_bound = false;
        used_trials = vr.v_draws;
    } else {
        throw ConfigInvalid("--which must be 3, 4 or 5");
    }

    bool pass = lower_bound ? empirical >= bound : empirical <= bound;
    std::string body = "lemma,dims,q,trials,empirical,bound,pass\n";
    body += std::to_string(which) + "," + dims + "," + std::to_string(q) + "," +
            std::to_string(used_trials) + "," + fixed6(empirical) + "," + fixed6(bound) + "," +
            (pass ? "1" : "0") + "\n";
    std::fputs(body.c_str(), stdout);

    if (!out_path.empty()) {
        write_file(out_path, body);
        json manifest;
        manifest["command"] = "lemmas";
        manifest["which"] = which;
        manifest["dims"] = dims;
        manifest["q"] = q;
        manifest["exhaustive"] = exhaustive;
        manifest["trials"] = trials;
        manifest["xsamples"] = xsamples;
        manifest["seed"] = seed;
        write_manifest(out_path, std::move(manifest));
    }
    return pass ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiple-unicast linear network code toolkit"};
    app.require_subcommand(1);

    NetworkArgs rates_net, sim_net, oracle_net;
    std::string out_path, sim_out, format = "csv";

    auto* rates = app.add_subcommand("rates", "per-pair transfer and interference ranks");
    rates_net.attach(rates);
    rates->add_option("--out", out_path, "write the JSON table here");

    auto* sim = app.add_subcommand("simulate", "Monte Carlo failure estimate for one pair");
    sim_net.attach(sim);
    int pair = 1, a = 0, aphase = 0, jobs = 1;
    int64_t n = 0, trials = 1000;
    uint64_t seed = 1;
    std::string alpha_arg = "auto", interference = "uniform";
    sim->add_option("--pair", pair, "1-based pair index")->capture_default_str();
    sim->add_option("--a", a, "bit-side interference budget")->capture_default_str();
    sim->add_option("--aphase", aphase, "phase-side interference budget")->capture_default_str();
    sim->add_option("--n", n, "block length in base-field uses")->required();
    sim->add_option("--alpha", alpha_arg, "extension degree, or auto")->capture_default_str();
    sim->add_option("--trials", trials, "number of trials")->capture_default_str();
    sim->add_option("--seed", seed, "master seed")->capture_default_str();
    sim->add_option("--interference", interference, "zero, uniform or fixed:PATH")
        ->capture_default_str();
    sim->add_option("--jobs", jobs, "worker threads")->capture_default_str();
    sim->add_option("--out", sim_out, "write the report here");
    sim->add_option("--format", format, "csv or json")->capture_default_str();

    auto* params = app.add_subcommand("params", "parameter schedules");
    std::string mode = "qprime", params_out;
    int64_t pn = 0;
    uint64_t pq = 2;
    int pm = 1, pa = 0, paphase = 0;
    params->add_option("--mode", mode, "qprime or theorem2")->capture_default_str();
    params->add_option("--n", pn, "block length")->required();
    params->add_option("--q", pq, "base field size")->capture_default_str();
    params->add_option("--m", pm, "pair size")->required();
    params->add_option("--a", pa, "bit-side interference budget")->capture_default_str();
    params->add_option("--aphase", paphase, "phase-side interference budget")
        ->capture_default_str();
    params->add_option("--out", params_out, "write the JSON here");

    auto* oracle = app.add_subcommand("oracle", "exact small-scale quantum checks");
    uint64_t oq = 2, oseed = 1;
    int om = 2, on = 1;
    std::string suite = "all";
    oracle->add_option("--q", oq, "field size")->capture_default_str();
    oracle->add_option("--m", om, "rows / wires")->capture_default_str();
    oracle->add_option("--n", on, "columns")->capture_default_str();
    oracle->add_option("--suite", suite, "lemma1, shadow or all")->capture_default_str();
    oracle->add_option("--seed", oseed, "seed for the random shadow node")->capture_default_str();
    oracle_net.attach(oracle);

    auto* lemmas = app.add_subcommand("lemmas", "empirical probability bounds");
    int which = 3, da = 2, db = 1, dc = 1, d = 2, dprime = 2, lm = 1;
    int64_t lnprime = 5, ltrials = 10000, xsamples = 50;
    uint64_t lq = 2, lseed = 1;
    bool exhaustive = false;
    std::string lemmas_out;
    lemmas->add_option("--which", which, "3, 4 or 5")->required();
    lemmas->add_option("--da", da, "ambient dimension (lemma 3)")->capture_default_str();
    lemmas->add_option("--db", db, "fixed subspace dimension (lemma 3)")->capture_default_str();
    lemmas->add_option("--dc", dc, "random subspace dimension (lemma 3)")->capture_default_str();
    lemmas->add_option("--d", d, "columns (lemma 4)")->capture_default_str();
    lemmas->add_option("--dprime", dprime, "rows (lemma 4)")->capture_default_str();
    lemmas->add_option("--m", lm, "pair size (lemma 5)")->capture_default_str();
    lemmas->add_option("--nprime", lnprime, "extension uses (lemma 5)")->capture_default_str();
    lemmas->add_option("--q", lq, "field size")->capture_default_str();
    lemmas->add_flag("--exhaustive", exhaustive, "enumerate instead of sampling");
    lemmas->add_option("--trials", ltrials, "samples (V draws for lemma 5)")
        ->capture_default_str();
    lemmas->add_option("--xsamples", xsamples, "x draws per V (lemma 5)")->capture_default_str();
    lemmas->add_option("--seed", lseed, "seed")->capture_default_str();
    lemmas->add_option("--out", lemmas_out, "write the CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (rates->parsed()) return cmd_rates(rates_net, out_path);
        if (sim->parsed())
            return cmd_simulate(sim_net, pair, a, aphase, n, alpha_arg, trials, seed, interference,
                                jobs, sim_out, format);
        if (params->parsed()) return cmd_params(mode, pn, pq, pm, pa, paphase, params_out);
        if (oracle->parsed()) return cmd_oracle(oq, om, on, suite, oracle_net, oseed);
        if (lemmas->parsed())
            return cmd_lemmas(which, da, db, dc, d, dprime, lm, lnprime, lq, exhaustive, ltrials,
                              xsamples, lseed, lemmas_out);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
