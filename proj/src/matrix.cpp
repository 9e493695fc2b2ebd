#include "qlnc/matrix.hpp"

#include <algorithm>

namespace qlnc {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw DimensionMismatch(what);
}

void check_compat(const Mat& a, const Mat& b) {
    if (!a.ctx() || !b.ctx()) throw ConfigInvalid("matrix without field context");
    if (!a.ctx()->same_tower(*b.ctx())) throw LevelMismatch("matrices from different towers");
    if (a.level() != b.level()) throw LevelMismatch("matrices at different levels");
}

}  // namespace

Mat::Mat(FieldCtxPtr cx, Level lv, int rows, int cols) : cx_(std::move(cx)), lv_(lv) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
    r_ = rows;
    c_ = cols;
    a_.assign((size_t)rows * cols, cx_->zero(lv));
}

Mat Mat::identity(FieldCtxPtr cx, Level lv, int n) {
    Mat m(cx, lv, n, n);
    for (int i = 0; i < n; ++i) m.el(i, i) = cx->one(lv);
    return m;
}

const FieldElem& Mat::at(int r, int c) const {
    if (r < 0 || r >= r_ || c < 0 || c >= c_) throw IndexOutOfRange("matrix index out of range");
    return a_[(size_t)r * c_ + c];
}

void Mat::set(int r, int c, FieldElem v) {
    if (r < 0 || r >= r_ || c < 0 || c >= c_) throw IndexOutOfRange("matrix index out of range");
    if (v.level != lv_ || v.c.size() != cx_->width(lv_))
        throw LevelMismatch("element level does not match matrix level");
    a_[(size_t)r * c_ + c] = std::move(v);
}

bool Mat::operator==(const Mat& o) const {
    if (r_ != o.r_ || c_ != o.c_ || lv_ != o.lv_) return false;
    if (cx_ && o.cx_ && !cx_->same_tower(*o.cx_)) return false;
    return a_ == o.a_;
}

Mat mat_add(const Mat& a, const Mat& b) {
    check_compat(a, b);
    require(a.rows() == b.rows() && a.cols() == b.cols(), "addition shape mismatch");
    Mat out(a.ctx(), a.level(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.el(i, j) = a.ctx()->add(a.el(i, j), b.el(i, j));
    return out;
}

Mat mat_sub(const Mat& a, const Mat& b) {
    check_compat(a, b);
    require(a.rows() == b.rows() && a.cols() == b.cols(), "subtraction shape mismatch");
    Mat out(a.ctx(), a.level(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.el(i, j) = a.ctx()->sub(a.el(i, j), b.el(i, j));
    return out;
}

Mat mat_neg(const Mat& a) {
    Mat out(a.ctx(), a.level(), a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.el(i, j) = a.ctx()->neg(a.el(i, j));
    return out;
}

Mat mat_mul(const Mat& a, const Mat& b) {
    check_compat(a, b);
    require(a.cols() == b.rows(), "product inner dimension mismatch");
    const auto& cx = *a.ctx();
    Mat out(a.ctx(), a.level(), a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const FieldElem& aik = a.el(i, k);
            if (cx.is_zero(aik)) continue;
            for (int j = 0; j < b.cols(); ++j) {
                const FieldElem& bkj = b.el(k, j);
                if (cx.is_zero(bkj)) continue;
                out.el(i, j) = cx.add(out.el(i, j), cx.mul(aik, bkj));
            }
        }
    }
    return out;
}

Mat transpose(const Mat& a) {
    Mat out(a.ctx(), a.level(), a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.el(j, i) = a.el(i, j);
    return out;
}

Mat hstack(const Mat& a, const Mat& b) {
    check_compat(a, b);
    require(a.rows() == b.rows(), "hstack row mismatch");
    Mat out(a.ctx(), a.level(), a.rows(), a.cols() + b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) out.el(i, j) = a.el(i, j );
        for (int j = 0; j < b.cols(); ++j) out.el(i, a.cols() + j) = b.el(i, j);
    }
    return out;
}

Mat vstack(const Mat& a, const Mat& b) {
    check_compat(a, b);
    require(a.cols() == b.cols(), "vstack column mismatch");
    Mat out(a.ctx(), a.level(), a.rows() + b.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.el(i, j) = a.el(i, j);
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) out.el(a.rows() + i, j) = b.el(i, j);
    return out;
}

Mat slice(const Mat& a, int r0, int r1, int c0, int c1) {
    if (r0 < 0 || r1 < r0 || r1 > a.rows() || c0 < 0 || c1 < c0 || c1 > a.cols())
        throw IndexOutOfRange("slice window out of range");
    Mat out(a.ctx(), a.level(), r1 - r0, c1 - c0);
    for (int i = r0; i < r1; ++i)
        for (int j = c0; j < c1; ++j) out.el(i - r0, j - c0) = a.el(i, j);
    return out;
}

Mat lifted(const Mat& a) {
    if (a.level() != Level::base) throw LevelMismatch("lifted expects a base-level matrix");
    Mat out(a.ctx(), Level::ext, a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) out.el(i, j) = a.ctx()->embed(a.el(i, j), Level::ext);
    return out;
}

namespace {

struct Rref {
    Mat R;
    std::vector<int> pivot_cols;
};

// reduced row echelon form, exact over the field
Rref rref(Mat A) {
    const auto& cx = *A.ctx();
    Rref out;
    int row = 0;
    for (int col = 0; col < A.cols() && row < A.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < A.rows(); ++i)
            if (!cx.is_zero(A.el(i, col))) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < A.cols(); ++j) std::swap(A.el(piv, j), A.el(row, j));
        FieldElem inv = cx.inv(A.el(row, col));
        for (int j = col; j < A.cols(); ++j) A.el(row, j) = cx.mul(A.el(row, j), inv);
        for (int i = 0; i < A.rows(); ++i) {
            if (i == row || cx.is_zero(A.el(i, col))) continue;
            FieldElem f = A.el(i, col);
            for (int j = col; j < A.cols(); ++j)
                A.el(i, j) = cx.sub(A.el(i, j), cx.mul(f, A.el(row, j)));
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    out.R = std::move(A);
    return out;
}

}  // namespace

int rank(const Mat& a) {
    if (a.empty()) return 0;
    return (int)rref(a).pivot_cols.size();
}

std::optional<Mat> try_inverse(const Mat& a) {
    require(a.rows() == a.cols(), "inverse of a non-square matrix");
    if (a.rows() == 0) return Mat(a.ctx(), a.level(), 0, 0);
    auto rr = rref(hstack(a, Mat::identity(a.ctx(), a.level(), a.rows())));
    // invertible iff the left half carries n pivots
    int n = a.rows();
    int left_pivots = 0;
    for (int c : rr.pivot_cols) left_pivots += (c < n) ? 1 : 0;
    if (left_pivots < n) return std::nullopt;
    return slice(rr.R, 0, n, n, 2 * n);
}

Mat inverse(const Mat& a) {
    auto inv = try_inverse(a);
    if (!inv) throw SingularMatrix("matrix is singular", rank(a));
    return *inv;
}

Mat kernel_basis(const Mat& a) {
    if (a.cols() == 0) return Mat(a.ctx(), a.level(), 0, 0);
    if (a.rows() == 0) return Mat::identity(a.ctx(), a.level(), a.cols());
    auto rr = rref(a);
    const auto& cx = *a.ctx();
    std::vector<bool> is_pivot(a.cols(), false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    int freec = a.cols() - (int)rr.pivot_cols.size();
    Mat K(a.ctx(), a.level(), a.cols(), freec);
    int kcol = 0;
    for (int j = 0; j < a.cols(); ++j) {
        if (is_pivot[j]) continue;
        K.el(j, kcol) = cx.one(a.level());
        for (size_t i = 0; i < rr.pivot_cols.size(); ++i) {
            int pc = rr.pivot_cols[i];
            if (pc < j) K.el(pc, kcol) = cx.neg(rr.R.el((int)i, j));
        }
        ++kcol;
    }
    return K;
}

Mat phase_dual(const Mat& a) { return inverse(transpose(a)); }

Mat sample_uniform(const FieldCtxPtr& cx, Level lv, int rows, int cols, Rng& rng) {
    Mat m(cx, lv, rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.el(i, j) = cx->sample(lv, rng);
    return m;
}

Mat sample_full_rank(const FieldCtxPtr& cx, Level lv, int rows, int cols, Rng& rng,
                     uint64_t* attempts) {
    require(rows <= cols, "full row rank needs rows <= cols");
    for (;;) {
        if (attempts) ++*attempts;
        Mat m = sample_uniform(cx, lv, rows, cols, rng);
        if (rank(m) == rows) return m;
    }
}

Mat sample_invertible(const FieldCtxPtr& cx, Level lv, int n, Rng& rng, uint64_t* attempts) {
    for (;;) {
        if (attempts) ++*attempts;
        Mat m = sample_uniform(cx, lv, n, n, rng);
        if (rank(m) == n) return m;
    }
}

SolveResult solve_projected(const Mat& O, const Mat& target, const RowMask& mask) {
    check_compat(O, target);
    require(O.rows() == O.cols(), "left factor must be square");
    require(target.rows() == O.rows() && target.cols() == O.cols(),
            "target shape must match left factor");
    const auto& cx = *O.ctx();
    const int m = O.rows();

    std::vector<bool> masked(m, false);
    int prev = -1;
    for (int r : mask.zeroed_rows) {
        if (r < 0 || r >= m) throw IndexOutOfRange("mask row out of range");
        if (r <= prev) throw ConfigInvalid("mask rows must be strictly increasing");
        masked[r] = true;
        prev = r;
    }
    for (int r : mask.zeroed_rows)
        for (int j = 0; j < m; ++j)
            if (!cx.is_zero(target.el(r, j)))
                throw ConfigInvalid("target must vanish on masked rows");

    std::vector<int> unmasked;
    for (int r = 0; r < m; ++r)
        if (!masked[r]) unmasked.push_back(r);

    // one elimination of O^T serves every unmasked row: x O = t  <=>  O^T x^T = t^T
    Mat aug(O.ctx(), O.level(), m, m + (int)unmasked.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) aug.el(i, j) = O.el(j, i);
    for (size_t k = 0; k < unmasked.size(); ++k)
        for (int i = 0; i < m; ++i) aug.el(i, m + (int)k) = target.el(unmasked[k], i);
    auto rr = rref(aug);
    for (int c : rr.pivot_cols)
        if (c >= m) return {SolveStatus::inconsistent, Mat()};

    Mat D(O.ctx(), O.level(), m, m);
    for (size_t k = 0; k < unmasked.size(); ++k) {
        for (size_t i = 0; i < rr.pivot_cols.size(); ++i)
            D.el(unmasked[k], rr.pivot_cols[i]) = rr.R.el((int)i, m + (int)k);
    }

    // greedy completion of the masked rows; D must come out invertible.
    // incremental elimination basis: one stored row per leading column
    std::vector<std::optional<Mat>> basis(m);
    auto try_absorb = [&](Mat r) {
        for (;;) {
            int lead = -1;
            for (int j = 0; j < m; ++j)
                if (!cx.is_zero(r.el(0, j))) {
                    lead = j;
                    break;
                }
            if (lead < 0) return false;
            if (!basis[lead]) {
                basis[lead] = std::move(r);
                return true;
            }
            const Mat& b = *basis[lead];
            FieldElem f = cx.mul(r.el(0, lead), cx.inv(b.el(0, lead)));
            for (int j = lead; j < m; ++j)
                r.el(0, j) = cx.sub(r.el(0, j), cx.mul(f, b.el(0, j)));
        }
    };
    // a particular solution can collide with rows already placed; shifting it by a
    // left-kernel vector of O keeps the projected identity and may restore independence
    std::optional<Mat> lker;
    for (int r : unmasked) {
        if (try_absorb(slice(D, r, r + 1, 0, m))) continue;
        if (!lker) lker = kernel_basis(transpose(O));
        bool placed = false;
        for (int k = 0; k < lker->cols() && !placed; ++k) {
            Mat cand = slice(D, r, r + 1, 0, m);
            for (int j = 0; j < m; ++j)
                cand.el(0, j) = cx.add(cand.el(0, j), lker->el(j, k));
            if (try_absorb(cand)) {
                for (int j = 0; j < m; ++j)
                    D.el(r, j) = cx.add(D.el(r, j), lker->el(j, k));
                placed = true;
            }
        }
        if (!placed) return {SolveStatus::cannot_complete, Mat()};
    }
    for (int r = 0; r < m; ++r) {
        if (!masked[r]) continue;
        bool placed = false;
        for (int k = 0; k < m && !placed; ++k) {
            Mat e(O.ctx(), O.level(), 1, m);
            e.el(0, k) = cx.one(O.level());
            if (try_absorb(e)) {
                D.el(r, k) = cx.one(O.level());
                placed = true;
            }
        }
        if (!placed) return {SolveStatus::cannot_complete, Mat()};
    }

    // re-multiply and confirm the projected identity
    Mat P = mat_mul(D, O);
    for (int i = 0; i < m; ++i) {
        if (masked[i]) continue;
        for (int j = 0; j < m; ++j)
            if (!(P.el(i, j) == target.el(i, j)))
                throw Error("projected solve verification failed");
    }
    return {SolveStatus::ok, std::move(D)};
}

}  // namespace qlnc
