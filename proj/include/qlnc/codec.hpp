#pragma once

#include "qlnc/matrix.hpp"

namespace qlnc {

/// Code schedule for one sender/receiver pair: m wires, interference budgets
/// a (bit side) and a_phase (phase side), n base-field uses grouped into
/// n_prime = n/alpha extension-field uses. Valid schedules have
/// a + a_phase < m and n_prime > 2m.
struct CodeConfig {
    int pair_index = 0;
    int m = 1;
    int a = 0;
    int a_phase = 0;
    int64_t n = 0;
    int alpha = 1;
    int64_t n_prime = 0;

    static CodeConfig make(int pair_index, int m, int a, int a_phase, int64_t n, int alpha);
    /// Message rows per extension use: m - a - a_phase.
    int message_rows() const { return m - a - a_phase; }
};

/// Shared randomness of one protocol instance, all at extension level.
/// R1: (m-a) x m full row rank, R2: (m-a_phase) x m full row rank,
/// V: 4m scalars, U1: invertible m x m.
struct CodeRandomness {
    Mat R1;
    Mat R2;
    std::vector<FieldElem> V;
    Mat U1;
};

/// Draw order is fixed (R1, R2, V, U1) so replays are reproducible.
CodeRandomness sample_randomness(const FieldCtxPtr& cx, const CodeConfig& cfg, Rng& rng);

/// Number of shared-random extension-field scalars a schedule consumes:
/// m(2m - a - a_phase + 4).
int64_t sr_scalar_count(const CodeConfig& cfg);
/// The same amount counted in base-field elements: alpha times more.
int64_t sr_base_element_count(const CodeConfig& cfg);

/// Bit-side plaintext: message M ((m-a-a_phase) x (n'-2m)), garbage blocks
/// E1 (m x m) and E2 (a_phase x (n'-2m)).
struct BitBranch {
    Mat M;
    Mat E1;
    Mat E2;
};

/// Phase-side plaintext: same shapes except E2 has a rows.
struct PhaseBranch {
    Mat M;
    Mat E1;
    Mat E2;
};

BitBranch sample_bit_branch(const FieldCtxPtr& cx, const CodeConfig& cfg, Rng& rng);
PhaseBranch sample_phase_branch(const FieldCtxPtr& cx, const CodeConfig& cfg, Rng& rng);

/// The column mixer built from V: block unitriangular with Vandermonde-style
/// blocks Q1..Q4 (Q_b[j][k] = V[(b-1)m + k]^(j+1)). Returned as the product
/// of its three elementary factors.
Mat build_u2(const FieldCtxPtr& cx, const std::vector<FieldElem>& V, const CodeConfig& cfg);
/// The three factors of build_u2, outermost first.
std::vector<Mat> build_u2_factors(const FieldCtxPtr& cx, const std::vector<FieldElem>& V,
                                  const CodeConfig& cfg);
/// Closed-form inverse of build_u2 (no elimination involved).
Mat build_u2_inv(const FieldCtxPtr& cx, const std::vector<FieldElem>& V, const CodeConfig& cfg);

/// Bit-side codeword U1 * [A|B|C] * U2 with A = [0; R1], B = E1,
/// C = [0; M; E2]. m x n_prime.
Mat encode_bit(const BitBranch& branch, const CodeRandomness& rnd, const CodeConfig& cfg);
/// Phase-side codeword (U1^T)^-1 * [E1|B|C] * (U2^T)^-1 with B = [R2; 0],
/// C = [E2; M; 0].
Mat encode_phase(const PhaseBranch& branch, const CodeRandomness& rnd, const CodeConfig& cfg);

struct DecodeOutcome {
    SolveStatus status = SolveStatus::ok;
    Mat m_hat;   // recovered message, (m-a-a_phase) x (n'-2m)
    Mat e2_hat;  // recovered trailing garbage rows
    bool ok() const { return status == SolveStatus::ok; }
};

/// Bit-side receiver: undo the column mixer, fit an invertible D against the
/// pilot block R1 on the unmasked rows, then read the message rows.
DecodeOutcome decode_bit(const Mat& Y, const Mat& R1, const std::vector<FieldElem>& V,
                         const CodeConfig& cfg);
DecodeOutcome decode_phase(const Mat& Y_phase, const Mat& R2, const std::vector<FieldElem>& V,
                           const CodeConfig& cfg);

// trial-loop cores reusing a prebuilt mixer inverse
DecodeOutcome decode_bit_with(const Mat& Y, const Mat& R1, const Mat& u2_inv,
                              const CodeConfig& cfg);
DecodeOutcome decode_phase_with(const Mat& Y_phase, const Mat& R2, const Mat& u2_tr,
                                const CodeConfig& cfg);

/// Row-support code spaces on m-row matrices: c1 vanishes on the first a
/// rows, c2 vanishes on the last a_phase rows, c2_dual vanishes everywhere
/// except the last a_phase rows. c2_dual is contained in c1 whenever the
/// schedule is valid.
enum class CssSpace { c1, c2, c2_dual };

bool css_membership(const Mat& X, const CodeConfig& cfg, CssSpace space);

}  // namespace qlnc
