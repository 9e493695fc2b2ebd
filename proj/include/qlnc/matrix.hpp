#pragma once

#include <optional>
#include <vector>

#include "qlnc/field.hpp"

namespace qlnc {

/// Dense matrix over one level of a field tower. Value type; all entries are
/// kept reduced. Dimensions may be zero (empty matrices take part in products
/// and stacking with the usual conventions).
class Mat {
  public:
    Mat() = default;
    Mat(FieldCtxPtr cx, Level lv, int rows, int cols);
    static Mat identity(FieldCtxPtr cx, Level lv, int n);

    int rows() const { return r_; }
    int cols() const { return c_; }
    Level level() const { return lv_; }
    const FieldCtxPtr& ctx() const { return cx_; }
    bool empty() const { return r_ == 0 || c_ == 0; }

    const FieldElem& at(int r, int c) const;
    void set(int r, int c, FieldElem v);

    // unchecked access, library internals only
    const FieldElem& el(int r, int c) const { return a_[(size_t)r * c_ + c]; }
    FieldElem& el(int r, int c) { return a_[(size_t)r * c_ + c]; }

    bool operator==(const Mat& o) const;

  private:
    FieldCtxPtr cx_;
    Level lv_ = Level::prime;
    int r_ = 0, c_ = 0;
    std::vector<FieldElem> a_;
};

Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);
Mat mat_neg(const Mat& a);
Mat mat_mul(const Mat& a, const Mat& b);
Mat transpose(const Mat& a);
Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
/// Half-open row/column window [r0, r1) x [c0, c1).
Mat slice(const Mat& a, int r0, int r1, int c0, int c1);
/// Entrywise embedding of a base-level matrix into the extension level.
Mat lifted(const Mat& a);

int rank(const Mat& a);
/// Exact inverse; throws SingularMatrix (carrying the rank) if none exists.
Mat inverse(const Mat& a);
std::optional<Mat> try_inverse(const Mat& a);
/// Columns form a basis of the right kernel {x : a x = 0}.
Mat kernel_basis(const Mat& a);
/// (a^T)^-1, the matrix the phase side of a bit-basis operation follows.
Mat phase_dual(const Mat& a);

Mat sample_uniform(const FieldCtxPtr& cx, Level lv, int rows, int cols, Rng& rng);
/// Uniform over matrices of full row rank (rows <= cols), by rejection.
Mat sample_full_rank(const FieldCtxPtr& cx, Level lv, int rows, int cols, Rng& rng,
                     uint64_t* attempts = nullptr);
/// Uniform over invertible n x n matrices, by rejection.
Mat sample_invertible(const FieldCtxPtr& cx, Level lv, int n, Rng& rng,
                      uint64_t* attempts = nullptr);

/// Rows that a projector forces to zero. Indices strictly increasing.
struct RowMask {
    std::vector<int> zeroed_rows;
};

enum class SolveStatus { ok, inconsistent, cannot_complete };

/// Invertible D with (D * O) zeroed on the masked rows equal to target.
/// Unmasked rows of D are the canonical solutions of their linear systems
/// (free coordinates zero); masked rows are completed greedily from standard
/// basis vectors, so the result is deterministic.
struct SolveResult {
    SolveStatus status = SolveStatus::ok;
    Mat D;
};

SolveResult solve_projected(const Mat& O, const Mat& target, const RowMask& mask);

}  // namespace qlnc
