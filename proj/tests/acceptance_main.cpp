// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the exit status is the number of failed criteria.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qlnc/montecarlo.hpp"
#include "qlnc/oracle.hpp"
#include "qlnc/schedule.hpp"

using namespace qlnc;

namespace {

Mat from_rows(const FieldCtxPtr& cx, Level lv, std::vector<std::vector<uint64_t>> rows) {
    Mat M(cx, lv, (int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) M.el(i, j) = cx->from_index(lv, rows[i][j]);
    return M;
}

bool expect(bool cond, std::string& detail, const std::string& msg) {
    if (!cond && detail.empty()) detail = msg;
    return cond;
}

// 1: the four-wire crossover example reproduces its published transfer pair
// and rate table.
bool butterfly_goldens(std::string& detail) {
    NetworkSpec spec = builtin_example("butterfly");
    TransferPair tp = compose_transfer(spec);
    auto cx = spec.ctx;
    Mat K = from_rows(cx, Level::base,
                      {{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}});
    Mat Kt = from_rows(cx, Level::base,
                       {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}});
    bool ok = expect(tp.K == K, detail, "bit transfer mismatch");
    ok &= expect(tp.K_phase == Kt, detail, "phase transfer mismatch");
    auto rows = rate_table(tp, spec.pair_sizes);
    ok &= expect(rows.size() == 2, detail, "expected two pairs");
    ok &= expect(rows[0].m_i == 2 && rows[0].rank_kic == 1 && rows[0].rank_ktic == 0, detail,
                 "pair 1 rates mismatch");
    ok &= expect(rows[1].m_i == 2 && rows[1].rank_kic == 0 && rows[1].rank_ktic == 1, detail,
                 "pair 2 rates mismatch");
    ok &= expect(rows[0].ok && rows[1].ok, detail, "diagonal blocks must be full rank");
    return ok;
}

// 2: the six-wire two-way relay over F3.
bool two_way_goldens(std::string& detail) {
    NetworkSpec spec = builtin_example("two_way");
    TransferPair tp = compose_transfer(spec);
    auto cx = spec.ctx;
    Mat K = from_rows(cx, Level::base,
                      {{1, 0, 0, 1, 0, 0},
                       {0, 1, 0, 0, 0, 0},
                       {0, 0, 1, 0, 0, 0},
                       {2, 0, 0, 1, 0, 0},
                       {0, 0, 0, 0, 1, 0},
                       {0, 0, 0, 0, 0, 1}});
    bool ok = expect(tp.K == K, detail, "bit transfer mismatch");
    ok &= expect(tp.K_phase == phase_dual(K), detail, "phase transfer mismatch");
    auto rows = rate_table(tp, spec.pair_sizes);
    for (size_t i = 0; i < rows.size(); ++i) {
        ok &= expect(rows[i].m_i == 3 && rows[i].rank_kic == 1 && rows[i].rank_ktic == 1, detail,
                     "rate row mismatch at pair " + std::to_string(i + 1));
        Feasibility f = check_feasible(rows[i], 1, 1);
        ok &= expect(f.feasible && !f.warn_a && !f.warn_aphase, detail,
                     "budget (1,1) should be feasible with no warnings");
    }
    // one message row per extension symbol survives the two budgets
    ok &= expect(CodeConfig::make(0, 3, 1, 1, 14, 2).message_rows() == 1, detail,
                 "net rate mismatch");
    return ok;
}

// 3: triangular one-sender networks; foreign-rank symmetry between the two
// shadows.
bool one_sender_rank_symmetry(std::string& detail) {
    Rng rng(301);
    for (int rep = 0; rep < 50; ++rep) {
        auto cx = FieldCtx::make(rep % 2 ? 3 : 2, 1, 1);
        int r = 2 + (int)rng.below(3);
        std::vector<Mat> diag, inter;
        for (int j = 0; j < r; ++j)
            diag.push_back(sample_invertible(cx, Level::base, 1 + (int)rng.below(3), rng));
        for (int j = 1; j < r; ++j)
            inter.push_back(sample_uniform(cx, Level::base, diag[0].rows(), diag[j].rows(), rng));
        NetworkSpec spec = one_sender_network(cx, diag, inter);
        TransferPair tp = compose_transfer(spec);
        for (int j = 1; j < r; ++j) {
            int bit = rank(block(tp.K, spec.pair_sizes, 0, j));
            int phase = rank(block(tp.K_phase, spec.pair_sizes, j, 0));
            if (!expect(bit == phase, detail,
                        "rank mismatch at rep " + std::to_string(rep) + ", pair " +
                            std::to_string(j + 1)))
                return false;
        }
    }
    return true;
}

// 4: the column mixer and its closed-form inverse cancel exactly.
bool mixer_roundtrip(std::string& detail) {
    const std::pair<unsigned, unsigned> towers[] = {{1, 2}, {2, 1}, {2, 2}, {1, 4},
                                                    {2, 4}, {1, 8}, {3, 4}, {2, 6}};
    Rng rng(401);
    for (auto [t, alpha] : towers) {
        auto cx = FieldCtx::make(2, t, alpha);
        for (int rep = 0; rep < 125; ++rep) {
            int m = 1 + (int)rng.below(3);
            int n_prime = 2 * m + 1 + (int)rng.below((uint64_t)(12 - 2 * m));
            CodeConfig cfg = CodeConfig::make(0, m, 0, 0, (int64_t)n_prime * alpha, (int)alpha);
            std::vector<FieldElem> V;
            for (int k = 0; k < 4 * m; ++k) V.push_back(cx->sample(Level::ext, rng));
            Mat prod = mat_mul(build_u2(cx, V, cfg), build_u2_inv(cx, V, cfg));
            if (!expect(prod == Mat::identity(cx, Level::ext, n_prime), detail,
                        "mixer inverse failed at q' = 2^" + std::to_string(t * alpha) +
                            ", m = " + std::to_string(m)))
                return false;
        }
    }
    return true;
}

// 5: with the foreign senders silent, every trial recovers the message.
bool zero_interference_recovery(std::string& detail) {
    Rng netrng(501);
    for (int net = 0; net < 10; ++net) {
        const uint64_t ps[3][2] = {{2, 1}, {2, 2}, {3, 1}};
        auto base = FieldCtx::make(ps[net % 3][0], (unsigned)ps[net % 3][1], 1);
        NetworkSpec spec;
        for (int tries = 0;; ++tries) {
            if (tries > 200) {
                detail = "could not draw a usable network";
                return false;
            }
            spec = NetworkSpec{};
            spec.ctx = base;
            int r = 1 + (int)netrng.below(3);
            for (int i = 0; i < r; ++i) spec.pair_sizes.push_back(1 + (int)netrng.below(3));
            NodeOp node;
            node.wires.resize(spec.total_wires());
            for (size_t w = 0; w < node.wires.size(); ++w) node.wires[w] = (int)w;
            node.matrix = sample_invertible(base, Level::base, spec.total_wires(), netrng);
            spec.nodes.push_back(node);
            spec.validate();
            auto rows = rate_table(compose_transfer(spec), spec.pair_sizes);
            if (rows[0].ok) break;  // the protocol assumes a full-rank own block
        }
        const int m = spec.pair_sizes[0];
        const int alpha = 3;
        auto cx = base->with_alpha(alpha);
        TrialConfig tc;
        tc.transfer = compose_transfer(spec.with_ctx(cx));
        tc.pair_sizes = spec.pair_sizes;
        tc.cfg = CodeConfig::make(0, m, 0, 0, (int64_t)(2 * m + 1) * alpha, alpha);
        tc.mode = InterferenceMode::zero;
        TrialContext T = make_trial_context(tc);
        for (uint64_t i = 0; i < 100; ++i) {
            Rng rng = Rng::for_trial(502 + (uint64_t)net, i);
            if (!expect(run_bit_trial(T, rng).message_ok, detail,
                        "bit trial missed at net " + std::to_string(net)))
                return false;
            if (!expect(run_phase_trial(T, rng).message_ok, detail,
                        "phase trial missed at net " + std::to_string(net)))
                return false;
        }
    }
    return true;
}

// 6: whenever all four success conditions hold, decoding succeeds.
bool implication_holds(std::string& detail) {
    {
        NetworkSpec spec = builtin_example("butterfly");
        auto cx = spec.ctx->with_alpha(4);
        TrialConfig tc;
        tc.transfer = compose_transfer(spec.with_ctx(cx));
        tc.pair_sizes = spec.pair_sizes;
        tc.cfg = CodeConfig::make(0, 2, 1, 0, 24, 4);
        tc.trials = 5000;
        tc.master_seed = 601;
        tc.jobs = 4;
        TrialReport rep = estimate(tc);
        if (!expect(rep.implication_violations == 0, detail,
                    "butterfly: " + std::to_string(rep.implication_violations) + " violations"))
            return false;
    }
    {
        NetworkSpec spec = builtin_example("two_way");
        auto cx = spec.ctx->with_alpha(2);
        TrialConfig tc;
        tc.transfer = compose_transfer(spec.with_ctx(cx));
        tc.pair_sizes = spec.pair_sizes;
        tc.cfg = CodeConfig::make(0, 3, 1, 1, 14, 2);
        tc.trials = 5000;
        tc.master_seed = 602;
        tc.jobs = 4;
        TrialReport rep = estimate(tc);
        if (!expect(rep.implication_violations == 0, detail,
                    "two_way: " + std::to_string(rep.implication_violations) + " violations"))
            return false;
    }
    return true;
}

// 7: the bit-side failure rate decays as the extension field grows; the
// phase side never fails on this network.
bool failure_decay(std::string& detail) {
    NetworkSpec spec = builtin_example("butterfly");
    double prev = 1.0;
    double last = 1.0;
    for (int alpha : {4, 8, 12}) {
        auto cx = spec.ctx->with_alpha((unsigned)alpha);
        TrialConfig tc;
        tc.transfer = compose_transfer(spec.with_ctx(cx));
        tc.pair_sizes = spec.pair_sizes;
        tc.cfg = CodeConfig::make(0, 2, 1, 0, 6 * alpha, alpha);
        tc.trials = 5000;
        tc.master_seed = 42;
        tc.jobs = 4;
        TrialReport rep = estimate(tc);
        if (!expect(rep.p_phase == 0.0, detail,
                    "phase failures at q' = 2^" + std::to_string(alpha)))
            return false;
        if (!expect(rep.p_bit <= prev, detail,
                    "p_bit grew at q' = 2^" + std::to_string(alpha)))
            return false;
        prev = rep.p_bit;
        last = rep.p_bit;
    }
    const double bound = (double)kDecaySlack * 36.0 / 2048.0;
    return expect(last <= bound, detail, "p_bit(2^12) above " + std::to_string(bound));
}

// 8: exhaustive subspace clearance at the smallest interesting size.
bool clearance_exact(std::string& detail) {
    auto f2 = FieldCtx::make(2, 1, 1);
    FractionResult r = subspace_clearance_experiment(f2, Level::base, 2, 1, 1, 0, true, 0);
    return expect(r.hits == 2 && r.total == 3, detail,
                  "got " + std::to_string(r.hits) + "/" + std::to_string(r.total));
}

// 9: exhaustive full-rank frequency at the smallest interesting size.
bool full_rank_exact(std::string& detail) {
    auto f2 = FieldCtx::make(2, 1, 1);
    FractionResult r = full_rank_experiment(f2, Level::base, 2, 2, 0, true, 0);
    return expect(r.hits == 6 && r.total == 16, detail,
                  "got " + std::to_string(r.hits) + "/" + std::to_string(r.total));
}

// 10: the mixer's first columns rarely annihilate a fixed nonzero row.
bool vanish_bound(std::string& detail) {
    auto f16 = FieldCtx::make(2, 4, 1);
    VanishResult r = mixer_vanish_experiment(f16, 1, 5, 2000, 50, 1001);
    const double bound = (double)kMixerVanishSlack * 3.0 / 16.0;
    return expect(r.max_rate <= bound, detail,
                  "max rate " + std::to_string(r.max_rate) + " above " + std::to_string(bound));
}

// 11: exact state-vector oracles agree with the matrix shadows.
bool oracle_agreement(std::string& detail) {
    const int cases[][3] = {{2, 2, 1}, {2, 1, 2}, {3, 1, 2}};
    for (auto [q, m, n] : cases) {
        auto cx = FieldCtx::make((uint64_t)q, 1, 1);
        OracleCheck chk = verify_lemma1(cx, m, n);
        if (!expect(chk.ok, detail, chk.detail)) return false;
    }
    OracleCheck chk = verify_shadow(builtin_example("butterfly"), 1);
    return expect(chk.ok, detail, chk.detail);
}

// 12: the asymptotic schedule reproduces its hand-computed point and shrinks
// with the block length.
bool schedule_goldens(std::string& detail) {
    ScheduleParams sp = theorem2_params(1ull << 20, 2, 3, 1, 1);
    bool ok = expect(sp.beta == 2 && sp.alpha == 100 && sp.k == 2400 && sp.n1 == 43200, detail,
                     "got (" + std::to_string(sp.beta) + ", " + std::to_string(sp.alpha) + ", " +
                         std::to_string(sp.k) + ", " + std::to_string(sp.n1) + ")");
    ScheduleParams s30 = theorem2_params(1ull << 30, 2, 3, 1, 1);
    ScheduleParams s40 = theorem2_params(1ull << 40, 2, 3, 1, 1);
    ok &= expect(sp.overhead > s30.overhead && s30.overhead > s40.overhead, detail,
                 "overhead must shrink");
    ok &= expect(sp.p_err_bound > s30.p_err_bound && s30.p_err_bound > s40.p_err_bound, detail,
                 "failure bound must shrink");
    return ok;
}

// 13: the shared randomness flattens to exactly alpha*m*(2m - a - a' + 4)
// base-field elements.
bool randomness_footprint(std::string& detail) {
    Rng rng(1301);
    const int shapes[][3] = {{1, 0, 0}, {2, 1, 0}, {3, 1, 1}, {3, 2, 0}};
    for (int alpha : {2, 3}) {
        for (auto [m, a, ap] : shapes) {
            auto cx = FieldCtx::make(2, 1, (unsigned)alpha);
            CodeConfig cfg =
                CodeConfig::make(0, m, a, ap, (int64_t)(2 * m + 2) * alpha, alpha);
            CodeRandomness rnd = sample_randomness(cx, cfg, rng);
            int64_t seen = 0;
            auto count = [&](const Mat& M) {
                for (int i = 0; i < M.rows(); ++i)
                    for (int j = 0; j < M.cols(); ++j)
                        seen += (int64_t)cx->flatten({M.el(i, j)}).size();
            };
            // shared randomness is what both ends hold: R1, R2, V. U1 stays
            // with the encoder and never reaches the decoder.
            count(rnd.R1);
            count(rnd.R2);
            seen += (int64_t)cx->flatten(rnd.V).size();
            int64_t want = (int64_t)alpha * m * (2 * m - a - ap + 4);
            if (!expect(seen == want && want == sr_base_element_count(cfg), detail,
                        "m=" + std::to_string(m) + ": counted " + std::to_string(seen) +
                            ", expected " + std::to_string(want)))
                return false;
        }
    }
    return true;
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria = {
        {"butterfly transfer goldens", butterfly_goldens},
        {"two-way relay goldens", two_way_goldens},
        {"one-sender interference rank symmetry", one_sender_rank_symmetry},
        {"column mixer inverse round trip", mixer_roundtrip},
        {"zero-interference message recovery", zero_interference_recovery},
        {"success conditions imply decoding", implication_holds},
        {"bit failure decay with field size", failure_decay},
        {"exact subspace clearance fraction", clearance_exact},
        {"exact full-rank fraction", full_rank_exact},
        {"mixer vanish probability bound", vanish_bound},
        {"state-vector oracle agreement", oracle_agreement},
        {"asymptotic schedule goldens", schedule_goldens},
        {"shared randomness footprint", randomness_footprint},
    };

    int failures = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool pass = false;
        try {
            pass = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = e.what();
        }
        std::printf("%2zu/%zu %s  %s\n", i + 1, criteria.size(), pass ? "PASS" : "FAIL",
                    criteria[i].label);
        if (!pass) {
            if (!detail.empty()) std::printf("      %s\n", detail.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - (size_t)failures,
                criteria.size());
    return failures ? 1 : 0;
}
