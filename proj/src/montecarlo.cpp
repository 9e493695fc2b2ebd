#include "qlnc/montecarlo.hpp"

#include <algorithm>
#include <thread>

namespace qlnc {

namespace {

Mat draw_interference(const TrialContext& T, Rng& rng) {
    const int other = T.k_ic.cols();
    switch (T.mode) {
        case InterferenceMode::zero: return Mat(T.cx, Level::ext, other, (int)T.cfg.n_prime);
        case InterferenceMode::uniform:
            return sample_uniform(T.cx, Level::ext, other, (int)T.cfg.n_prime, rng);
        case InterferenceMode::fixed: return T.fixed_z;
    }
    throw ConfigInvalid("unknown interference mode");
}

GammaFlags gamma_bit(const TrialContext& T, const CodeRandomness& rnd, const Mat& Z,
                     const Mat& u2_inv) {
    const auto& cx = T.cx;
    const CodeConfig& cfg = T.cfg;
    Mat pilot = vstack(Mat(cx, Level::ext, cfg.a, cfg.m), rnd.R1);
    Mat x_cols = mat_mul(T.k_ii, mat_mul(rnd.U1, pilot));
    Mat kz = mat_mul(T.k_ic, Z);
    Mat y_full = mat_mul(kz, u2_inv);
    Mat y_a = slice(y_full, 0, cfg.m, 0, cfg.m);
    const int d1 = rank(x_cols);
    const int d2 = rank(kz);
    GammaFlags f;
    f.g1 = rank(hstack(x_cols, y_full)) == d1 + d2;
    f.g2 = rank(mat_add(x_cols, y_a)) == d1 + d2;
    f.g2prime = rank(y_a) == d2;
    f.g3 = d1 == cfg.m - cfg.a;
    return f;
}

GammaFlags gamma_phase(const TrialContext& T, const CodeRandomness& rnd, const Mat& Z,
                       const Mat& u2_tr) {
    const auto& cx = T.cx;
    const CodeConfig& cfg = T.cfg;
    Mat pilot = vstack(rnd.R2, Mat(cx, Level::ext, cfg.a_phase, cfg.m));
    Mat x_cols = mat_mul(T.kt_ii, mat_mul(phase_dual(rnd.U1), pilot));
    Mat kz = mat_mul(T.kt_ic, Z);
    Mat y_full = mat_mul(kz, u2_tr);
    Mat y_b = slice(y_full, 0, cfg.m, cfg.m, 2 * cfg.m);
    const int d1 = rank(x_cols);
    const int d2 = rank(kz);
    GammaFlags f;
    f.g1 = rank(hstack(x_cols, y_full)) == d1 + d2;
    f.g2 = rank(mat_add(x_cols, y_b)) == d1 + d2;
    f.g2prime = rank(y_b) == d2;
    f.g3 = d1 == cfg.m - cfg.a_phase;
    return f;
}

}  // namespace

TrialContext make_trial_context(const TrialConfig& tc) {
    const auto& ps = tc.pair_sizes;
    const int i = tc.cfg.pair_index;
    if (i < 0 || i >= (int)ps.size()) throw IndexOutOfRange("pair index out of range");
    if (ps[i] != tc.cfg.m) throw ConfigInvalid("schedule m does not match the pair size");
    TrialContext T;
    T.cx = tc.transfer.K.ctx();
    if ((unsigned)tc.cfg.alpha != T.cx->alpha())
        throw ConfigInvalid("schedule alpha does not match the field tower");
    T.k_ii = lifted(block(tc.transfer.K, ps, i, i));
    T.k_ic = lifted(complement_block(tc.transfer.K, ps, i));
    T.kt_ii = lifted(block(tc.transfer.K_phase, ps, i, i));
    T.kt_ic = lifted(complement_block(tc.transfer.K_phase, ps, i));
    T.cfg = tc.cfg;
    T.mode = tc.mode;
    if (tc.mode == InterferenceMode::fixed) {
        if (tc.fixed_z.rows() != T.k_ic.cols() || tc.fixed_z.cols() != tc.cfg.n_prime ||
            tc.fixed_z.level() != Level::ext)
            throw DimensionMismatch("fixed interference block has wrong shape");
        T.fixed_z = tc.fixed_z;
    }
    return T;
}

TrialResult run_bit_trial(const TrialContext& T, Rng& rng) {
    CodeRandomness rnd = sample_randomness(T.cx, T.cfg, rng);
    BitBranch bb = sample_bit_branch(T.cx, T.cfg, rng);
    Mat Z = draw_interference(T, rng);
    Mat X = encode_bit(bb, rnd, T.cfg);
    Mat Y = mat_add(mat_mul(T.k_ii, X), mat_mul(T.k_ic, Z));
    Mat u2_inv = build_u2_inv(T.cx, rnd.V, T.cfg);
    DecodeOutcome out = decode_bit_with(Y, rnd.R1, u2_inv, T.cfg);
    TrialResult res;
    res.solver_ok = out.ok();
    res.message_ok = out.ok() && out.m_hat == bb.M;
    res.strict_ok = res.message_ok && out.e2_hat == bb.E2;
    res.gamma = gamma_bit(T, rnd, Z, u2_inv);
    return res;
}

TrialResult run_phase_trial(const TrialContext& T, Rng& rng) {
    CodeRandomness rnd = sample_randomness(T.cx, T.cfg, rng);
    PhaseBranch pb = sample_phase_branch(T.cx, T.cfg, rng);
    Mat Z = draw_interference(T, rng);
    Mat X = encode_phase(pb, rnd, T.cfg);
    Mat Y = mat_add(mat_mul(T.kt_ii, X), mat_mul(T.kt_ic, Z));
    Mat u2_tr = transpose(build_u2(T.cx, rnd.V, T.cfg));
    DecodeOutcome out = decode_phase_with(Y, rnd.R2, u2_tr, T.cfg);
    TrialResult res;
    res.solver_ok = out.ok();
    res.message_ok = out.ok() && out.m_hat == pb.M;
    res.strict_ok = res.message_ok && out.e2_hat == pb.E2;
    res.gamma = gamma_phase(T, rnd, Z, u2_tr);
    return res;
}

TrialReport estimate(const TrialConfig& tc) {
    if (tc.trials < 1) throw ConfigInvalid("trial count must be positive");
    TrialContext T = make_trial_context(tc);

    TrialReport rep;
    rep.trials = tc.trials;
    {
        auto rates = rate_table(tc.transfer, tc.pair_sizes);
        const RateRow& row = rates[tc.cfg.pair_index];
        if (!row.ok) throw InfeasibleConfig("pair's own transfer block is rank deficient");
        Feasibility f = check_feasible(row, tc.cfg.a, tc.cfg.a_phase);
        if (!f.feasible) throw InfeasibleConfig("interference budgets must satisfy a + a' < m");
        rep.warn_a = f.warn_a;
        rep.warn_aphase = f.warn_aphase;
    }

    struct PairResult {
        TrialResult bit, phase;
    };
    std::vector<PairResult> results((size_t)tc.trials);
    auto worker = [&](int64_t lo, int64_t hi) {
        for (int64_t i = lo; i < hi; ++i) {
            Rng rng = Rng::for_trial(tc.master_seed, (uint64_t)i);
            results[(size_t)i].bit = run_bit_trial(T, rng);
            results[(size_t)i].phase = run_phase_trial(T, rng);
        }
    };
    const int jobs = std::clamp(tc.jobs, 1, 64);
    if (jobs == 1) {
        worker(0, tc.trials);
    } else {
        std::vector<std::thread> pool;
        int64_t chunk = (tc.trials + jobs - 1) / jobs;
        for (int j = 0; j < jobs; ++j) {
            int64_t lo = j * chunk, hi = std::min<int64_t>(tc.trials, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    for (const auto& pr : results) {
        rep.bit_failures += !pr.bit.message_ok;
        rep.phase_failures += !pr.phase.message_ok;
        rep.bit_solver_failures += !pr.bit.solver_ok;
        rep.phase_solver_failures += !pr.phase.solver_ok;
        rep.bit_e2_mismatches += pr.bit.message_ok && !pr.bit.strict_ok;
        rep.phase_e2_mismatches += pr.phase.message_ok && !pr.phase.strict_ok;
        rep.gamma_bit.add(pr.bit.gamma);
        rep.gamma_phase.add(pr.phase.gamma);
        rep.bit_implication_violations += pr.bit.gamma.all() && !pr.bit.message_ok;
        rep.phase_implication_violations += pr.phase.gamma.all() && !pr.phase.message_ok;
    }
    rep.implication_violations = rep.bit_implication_violations + rep.phase_implication_violations;
    rep.p_bit = (double)rep.bit_failures / (double)rep.trials;
    rep.p_phase = (double)rep.phase_failures / (double)rep.trials;
    rep.fidelity_lower_bound = 1.0 - (rep.p_bit + rep.p_phase);
    return rep;
}

FractionResult subspace_clearance_experiment(const FieldCtxPtr& cx, Level lv, int d_a, int d_b,
                                             int d_c, int64_t trials, bool exhaustive,
                                             uint64_t seed) {
    if (d_b < 0 || d_c < 1 || d_b > d_a || d_c > d_a)
        throw ConfigInvalid("need 0 <= d_b <= d_a and 1 <= d_c <= d_a");
    Mat W(cx, lv, d_a, d_b);
    for (int i = 0; i < d_b; ++i) W.el(i, i) = cx->one(lv);
    auto clears = [&](const Mat& B) { return rank(hstack(W, B)) == d_b + d_c; };

    FractionResult out;
    if (exhaustive) {
        const uint64_t q = cx->size_u64(lv);
        double total = 1;
        for (int i = 0; i < d_a * d_c; ++i) total *= (double)q;
        if (total > (double)(1u << 22)) throw FieldTooLarge("exhaustive mode too large");
        std::vector<uint64_t> idx((size_t)d_a * d_c, 0);
        Mat B(cx, lv, d_a, d_c);
        for (;;) {
            for (int r = 0; r < d_a; ++r)
                for (int c = 0; c < d_c; ++c)
                    B.el(r, c) = cx->from_index(lv, idx[(size_t)r * d_c + c]);
            if (rank(B) == d_c) {
                ++out.total;
                out.hits += clears(B);
            }
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == q) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    } else {
        Rng rng(seed);
        out.total = trials;
        for (int64_t i = 0; i < trials; ++i) {
            Mat B = sample_full_rank(cx, lv, d_c, d_a, rng);
            out.hits += clears(transpose(B));
        }
    }
    return out;
}

FractionResult full_rank_experiment(const FieldCtxPtr& cx, Level lv, int d, int d_prime,
                                    int64_t trials, bool exhaustive, uint64_t seed) {
    if (d_prime < 0 || d_prime > d) throw ConfigInvalid("need 0 <= d' <= d");
    FractionResult out;
    if (exhaustive) {
        const uint64_t q = cx->size_u64(lv);
        double total = 1;
        for (int i = 0; i < d * d_prime; ++i) total *= (double)q;
        if (total > (double)(1u << 22)) throw FieldTooLarge("exhaustive mode too large");
        std::vector<uint64_t> idx((size_t)d * d_prime, 0);
        Mat B(cx, lv, d_prime, d);
        for (;;) {
            for (int r = 0; r < d_prime; ++r)
                for (int c = 0; c < d; ++c) B.el(r, c) = cx->from_index(lv, idx[(size_t)r * d + c]);
            ++out.total;
            out.hits += rank(B) == d_prime;
            size_t k = 0;
            while (k < idx.size() && ++idx[k] == q) idx[k++] = 0;
            if (k == idx.size()) break;
        }
    } else {
        Rng rng(seed);
        out.total = trials;
        for (int64_t i = 0; i < trials; ++i) {
            Mat B = sample_uniform(cx, lv, d_prime, d, rng);
            out.hits += rank(B) == d_prime;
        }
    }
    return out;
}

VanishResult mixer_vanish_experiment(const FieldCtxPtr& cx, int m, int64_t n_prime,
                                     int64_t v_draws, int64_t x_draws, uint64_t seed) {
    CodeConfig cfg = CodeConfig::make(0, m, 0, 0, n_prime * cx->alpha(), (int)cx->alpha());
    VanishResult out;
    out.v_draws = v_draws;
    out.x_draws = x_draws;
    Rng rng(seed);
    for (int64_t xi = 0; xi < x_draws; ++xi) {
        Mat x(cx, Level::ext, 1, (int)n_prime);
        do {
            x = sample_uniform(cx, Level::ext, 1, (int)n_prime, rng);
        } while (rank(x) == 0);
        int64_t vanish = 0;
        for (int64_t vi = 0; vi < v_draws; ++vi) {
            std::vector<FieldElem> V;
            V.reserve(4 * m);
            for (int k = 0; k < 4 * m; ++k) V.push_back(cx->sample(Level::ext, rng));
            Mat u2_inv = build_u2_inv(cx, V, cfg);
            Mat row = mat_mul(x, slice(u2_inv, 0, (int)n_prime, 0, m));
            bool zero = true;
            for (int j = 0; j < m; ++j)
                if (!cx->is_zero(row.el(0, j))) zero = false;
            vanish += zero;
        }
        double rate = (double)vanish / (double)v_draws;
        out.max_rate = std::max(out.max_rate, rate);
    }
    return out;
}

}  // namespace qlnc
