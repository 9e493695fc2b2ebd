#pragma once

#include <complex>
#include <string>

#include "qlnc/network.hpp"

namespace qlnc {

/// Amplitude cap for exact state vectors: QLNC_CAP from the environment, or
/// 2^16. Enumeration-heavy checks budget 1024x this in visited amplitudes.
uint64_t oracle_cap();

/// Exact state vector over the register of m x n base-field labels. The label
/// X indexes amplitude sum_{i,j} index(X[i][j]) * q^(i*n+j), row-major, first
/// entry least significant.
class StateVec {
  public:
    StateVec(FieldCtxPtr cx, int m, int n, uint64_t cap = oracle_cap());

    const FieldCtxPtr& ctx() const { return cx_; }
    int m() const { return m_; }
    int n() const { return n_; }
    uint64_t dim() const { return (uint64_t)amps_.size(); }

    uint64_t index_of_label(const Mat& X) const;
    Mat label_of_index(uint64_t idx) const;

    std::complex<double>& amp(uint64_t idx) { return amps_[idx]; }
    const std::complex<double>& amp(uint64_t idx) const { return amps_[idx]; }

    double norm() const;

  private:
    FieldCtxPtr cx_;
    int m_, n_;
    std::vector<std::complex<double>> amps_;
};

/// One-hot bit-basis state |X>.
StateVec make_bit_state(const Mat& X, uint64_t cap = oracle_cap());
/// Phase-basis state for label Z: q^(-mn/2) sum_X w^(-sum tr(X_jk Z_jk)) |X>
/// with w = exp(2 pi i / p).
StateVec make_phase_state(const Mat& Z, uint64_t cap = oracle_cap());

/// Bit-basis action |X> -> |AX> of an invertible m x m matrix.
StateVec apply_left(const StateVec& s, const Mat& A);
/// Bit-basis action |X> -> |XB> of an invertible n x n matrix.
StateVec apply_right(const StateVec& s, const Mat& B);

std::complex<double> inner(const StateVec& a, const StateVec& b);
/// Elementwise comparison after aligning the first significant amplitude's
/// phase; true when the residual stays within tol.
bool approx_equal(const StateVec& a, const StateVec& b, double tol = 1e-9);

struct OracleCheck {
    bool ok = true;
    std::string detail;
};

/// For every invertible A (m x m) and B (n x n) over F_q and every label,
/// confirm that the bit-basis actions permute phase-basis states by the
/// transpose inverse: L_A |M>_p = |(A^T)^-1 M>_p and mirrored for B.
OracleCheck verify_lemma1(const FieldCtxPtr& cx, int m, int n, uint64_t cap = oracle_cap());

/// Drive every bit label and every phase label of an n-column register
/// through the network's node operations and compare against the one-shot
/// transfer matrices K and (K^T)^-1.
OracleCheck verify_shadow(const NetworkSpec& spec, int n, uint64_t cap = oracle_cap());

}  // namespace qlnc
