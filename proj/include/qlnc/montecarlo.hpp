#pragma once

#include "qlnc/codec.hpp"
#include "qlnc/network.hpp"

namespace qlnc {

enum class InterferenceMode { zero, uniform, fixed };

/// One estimation run: a composed network, a schedule for one pair, an
/// interference model and a trial budget. Trials are independent; trial i
/// draws everything from Rng::for_trial(master_seed, i), so reports are
/// byte-stable across reruns and across jobs counts.
struct TrialConfig {
    TransferPair transfer;  // base level, context already at the chosen alpha
    std::vector<int> pair_sizes;
    CodeConfig cfg;
    InterferenceMode mode = InterferenceMode::uniform;
    Mat fixed_z;  // ext level, (m_total - m_i) x n_prime, for fixed mode
    int64_t trials = 1000;
    uint64_t master_seed = 1;
    int jobs = 1;
};

/// Success-condition flags of one trial. g1: the pilot image and the mixed
/// interference span intersect trivially. g2: their sum is seen at full rank
/// in the measured block. g2prime: the first block of the mixed interference
/// keeps its rank. g3: the pilot image has the expected dimension.
struct GammaFlags {
    bool g1 = false;
    bool g2 = false;
    bool g2prime = false;
    bool g3 = false;
    bool all() const { return g1 && g2 && g2prime && g3; }
};

struct GammaStats {
    int64_t g1 = 0, g2 = 0, g2prime = 0, g3 = 0, all = 0;
    void add(const GammaFlags& f) {
        g1 += f.g1;
        g2 += f.g2;
        g2prime += f.g2prime;
        g3 += f.g3;
        all += f.all();
    }
};

struct TrialReport {
    int64_t trials = 0;
    int64_t bit_failures = 0;
    int64_t phase_failures = 0;
    double p_bit = 0;
    double p_phase = 0;
    /// 1 - (p_bit + p_phase): entanglement fidelity of the simulated code is
    /// at least this.
    double fidelity_lower_bound = 1;
    GammaStats gamma_bit;
    GammaStats gamma_phase;
    /// Trials where every gamma flag held yet decoding missed the message.
    /// Zero is the expected value; anything else indicates a defect.
    int64_t bit_implication_violations = 0;
    int64_t phase_implication_violations = 0;
    int64_t implication_violations = 0;
    /// Message recovered but trailing garbage rows mismatched (strict check).
    int64_t bit_e2_mismatches = 0;
    int64_t phase_e2_mismatches = 0;
    /// Solver-reported failures (subset of the failure counts).
    int64_t bit_solver_failures = 0;
    int64_t phase_solver_failures = 0;
    bool warn_a = false;
    bool warn_aphase = false;
};

/// Monte Carlo failure estimate over tc.trials independent protocol runs.
TrialReport estimate(const TrialConfig& tc);

/// Precomputed per-run state for single-trial execution (testing hook).
struct TrialContext {
    FieldCtxPtr cx;
    Mat k_ii, k_ic;    // ext level blocks of K for the pair
    Mat kt_ii, kt_ic;  // ext level blocks of the phase transfer
    CodeConfig cfg;
    InterferenceMode mode;
    Mat fixed_z;
};

TrialContext make_trial_context(const TrialConfig& tc);

struct TrialResult {
    bool message_ok = false;
    bool strict_ok = false;
    bool solver_ok = false;
    GammaFlags gamma;
};

TrialResult run_bit_trial(const TrialContext& ctx, Rng& rng);
TrialResult run_phase_trial(const TrialContext& ctx, Rng& rng);

/// Empirical frequency of a random d_c-dimensional subspace meeting a fixed
/// d_b-dimensional one only at the origin, inside dimension d_a.
struct FractionResult {
    int64_t hits = 0;
    int64_t total = 0;
    double fraction() const { return total ? (double)hits / (double)total : 0.0; }
};

FractionResult subspace_clearance_experiment(const FieldCtxPtr& cx, Level lv, int d_a, int d_b,
                                             int d_c, int64_t trials, bool exhaustive,
                                             uint64_t seed);

/// Empirical frequency of a uniform d_prime x d matrix having full row rank.
FractionResult full_rank_experiment(const FieldCtxPtr& cx, Level lv, int d, int d_prime,
                                    int64_t trials, bool exhaustive, uint64_t seed);

/// Worst observed probability, over sampled nonzero row vectors x, that
/// x * (first m columns of the inverse mixer) vanishes when V is drawn
/// uniformly. The schedule bound is slack * ((n'-2m)/q')^m.
struct VanishResult {
    double max_rate = 0;
    int64_t v_draws = 0;
    int64_t x_draws = 0;
};

VanishResult mixer_vanish_experiment(const FieldCtxPtr& cx, int m, int64_t n_prime,
                                     int64_t v_draws, int64_t x_draws, uint64_t seed);

inline constexpr int kSubspaceClearanceSlack = 4;  // against 1 - slack*q'^(db+dc-da-1)
inline constexpr int kFullRankSlack = 2;           // against 1 - slack/q'
inline constexpr int kMixerVanishSlack = 5;        // against slack*((n'-2m)/q')^m
inline constexpr int kDecaySlack = 10;             // against slack*n'^2/q'

}  // namespace qlnc
