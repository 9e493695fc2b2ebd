#include "qlnc/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace qlnc {

uint64_t oracle_cap() {
    if (const char* env = std::getenv("QLNC_CAP")) {
        char* end = nullptr;
        uint64_t v = std::strtoull(env, &end, 10);
        if (end != env && v > 0) return v;
    }
    return 1ull << 16;
}

namespace {

uint64_t pow_checked(uint64_t b, uint64_t e, uint64_t cap) {
    uint64_t r = 1;
    for (uint64_t i = 0; i < e; ++i) {
        if (r > cap / b) throw CapExceeded("state dimension exceeds the amplitude cap");
        r *= b;
    }
    return r;
}

void check_work(double work, uint64_t cap, const char* what) {
    if (work > 1024.0 * (double)cap)
        throw CapExceeded(std::string(what) + ": enumeration exceeds the work budget");
}

}  // namespace

StateVec::StateVec(FieldCtxPtr cx, int m, int n, uint64_t cap) : cx_(std::move(cx)), m_(m), n_(n) {
    if (m < 1 || n < 1) throw DimensionMismatch("register needs positive dimensions");
    uint64_t q = cx_->size_u64(Level::base);
    uint64_t d = pow_checked(q, (uint64_t)m * n, cap);
    amps_.assign(d, {0.0, 0.0});
}

uint64_t StateVec::index_of_label(const Mat& X) const {
    if (X.rows() != m_ || X.cols() != n_ || X.level() != Level::base)
        throw DimensionMismatch("label has wrong shape");
    uint64_t q = cx_->size_u64(Level::base);
    uint64_t idx = 0;
    for (int i = m_ - 1; i >= 0; --i)
        for (int j = n_ - 1; j >= 0; --j) idx = idx * q + cx_->index_of(X.el(i, j));
    return idx;
}

Mat StateVec::label_of_index(uint64_t idx) const {
    uint64_t q = cx_->size_u64(Level::base);
    Mat X(cx_, Level::base, m_, n_);
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < n_; ++j) {
            X.el(i, j) = cx_->from_index(Level::base, idx % q);
            idx /= q;
        }
    return X;
}

double StateVec::norm() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

StateVec make_bit_state(const Mat& X, uint64_t cap) {
    StateVec s(X.ctx(), X.rows(), X.cols(), cap);
    s.amp(s.index_of_label(X)) = {1.0, 0.0};
    return s;
}

StateVec make_phase_state(const Mat& Z, uint64_t cap) {
    const auto& cx = Z.ctx();
    StateVec s(cx, Z.rows(), Z.cols(), cap);
    const double p = (double)cx->p();
    const double scale = 1.0 / std::sqrt((double)s.dim());
    for (uint64_t idx = 0; idx < s.dim(); ++idx) {
        Mat X = s.label_of_index(idx);
        uint64_t tr_sum = 0;
        for (int i = 0; i < Z.rows(); ++i)
            for (int j = 0; j < Z.cols(); ++j)
                tr_sum = (tr_sum + cx->trace(cx->mul(X.el(i, j), Z.el(i, j))).c[0]) % cx->p();
        double angle = -2.0 * std::numbers::pi * (double)tr_sum / p;
        s.amp(idx) = std::polar(scale, angle);
    }
    return s;
}

StateVec apply_left(const StateVec& s, const Mat& A) {
    if (A.rows() != s.m() || A.cols() != s.m()) throw DimensionMismatch("left factor shape");
    StateVec out(s.ctx(), s.m(), s.n(), s.dim());
    for (uint64_t idx = 0; idx < s.dim(); ++idx) {
        if (s.amp(idx) == std::complex<double>{0.0, 0.0}) continue;
        Mat X = s.label_of_index(idx);
        out.amp(out.index_of_label(mat_mul(A, X))) += s.amp(idx);
    }
    return out;
}

StateVec apply_right(const StateVec& s, const Mat& B) {
    if (B.rows() != s.n() || B.cols() != s.n()) throw DimensionMismatch("right factor shape");
    StateVec out(s.ctx(), s.m(), s.n(), s.dim());
    for (uint64_t idx = 0; idx < s.dim(); ++idx) {
        if (s.amp(idx) == std::complex<double>{0.0, 0.0}) continue;
        Mat X = s.label_of_index(idx);
        out.amp(out.index_of_label(mat_mul(X, B))) += s.amp(idx);
    }
    return out;
}

std::complex<double> inner(const StateVec& a, const StateVec& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("state dimensions differ");
    std::complex<double> s = 0;
    for (uint64_t i = 0; i < a.dim(); ++i) s += std::conj(a.amp(i)) * b.amp(i);
    return s;
}

bool approx_equal(const StateVec& a, const StateVec& b, double tol) {
    if (a.dim() != b.dim()) return false;
    std::complex<double> factor{1.0, 0.0};
    for (uint64_t i = 0; i < a.dim(); ++i) {
        if (std::abs(a.amp(i)) > 1e-12) {
            if (std::abs(b.amp(i)) < 1e-12) return false;
            factor = b.amp(i) / a.amp(i);
            factor /= std::abs(factor);
            break;
        }
    }
    for (uint64_t i = 0; i < a.dim(); ++i)
        if (std::abs(a.amp(i) * factor - b.amp(i)) > tol) return false;
    return true;
}

OracleCheck verify_lemma1(const FieldCtxPtr& cx, int m, int n, uint64_t cap) {
    uint64_t q = cx->size_u64(Level::base);
    uint64_t dim = pow_checked(q, (uint64_t)m * n, cap);
    double cand = std::pow((double)q, m * m) + std::pow((double)q, n * n);
    check_work((double)dim * cand, cap, "invertible-action sweep");

    auto sweep = [&](int k, bool left) -> OracleCheck {
        uint64_t total = pow_checked(q, (uint64_t)k * k, ~0ull >> 1);
        for (uint64_t ai = 0; ai < total; ++ai) {
            Mat A(cx, Level::base, k, k);
            uint64_t rest = ai;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    A.el(i, j) = cx->from_index(Level::base, rest % q);
                    rest /= q;
                }
            if (rank(A) != k) continue;
            Mat dual = phase_dual(A);
            for (uint64_t li = 0; li < dim; ++li) {
                StateVec probe(cx, m, n, cap);
                Mat M = probe.label_of_index(li);
                // bit side: a permutation of labels
                StateVec bit_in = make_bit_state(M, cap);
                StateVec bit_out = left ? apply_left(bit_in, A) : apply_right(bit_in, A);
                Mat bit_expect = left ? mat_mul(A, M) : mat_mul(M, A);
                if (!approx_equal(bit_out, make_bit_state(bit_expect, cap)))
                    return {false, "bit-basis action mismatch"};
                // phase side follows the transpose inverse
                StateVec ph_in = make_phase_state(M, cap);
                StateVec ph_out = left ? apply_left(ph_in, A) : apply_right(ph_in, A);
                Mat ph_expect = left ? mat_mul(dual, M) : mat_mul(M, dual);
                if (!approx_equal(ph_out, make_phase_state(ph_expect, cap)))
                    return {false, "phase-basis action mismatch"};
            }
        }
        return {true, ""};
    };
    OracleCheck lc = sweep(m, true);
    if (!lc.ok) return lc;
    return sweep(n, false);
}

OracleCheck verify_shadow(const NetworkSpec& spec, int n, uint64_t cap) {
    spec.validate();
    const int m = spec.total_wires();
    uint64_t q = spec.ctx->size_u64(Level::base);
    uint64_t dim = pow_checked(q, (uint64_t)m * n, cap);
    check_work((double)dim * (double)dim * (double)(spec.nodes.size() + 2), cap,
               "shadow label sweep");

    TransferPair tp = compose_transfer(spec);
    std::vector<Mat> embedded;
    embedded.reserve(spec.nodes.size());
    for (const auto& node : spec.nodes) embedded.push_back(embedded_node_matrix(spec, node));

    StateVec probe(spec.ctx, m, n, cap);
    for (uint64_t li = 0; li < dim; ++li) {
        Mat X = probe.label_of_index(li);
        StateVec bit = make_bit_state(X, cap);
        StateVec phase = make_phase_state(X, cap);
        for (const auto& E : embedded) {
            bit = apply_left(bit, E);
            phase = apply_left(phase, E);
        }
        if (!approx_equal(bit, make_bit_state(mat_mul(tp.K, X), cap)))
            return {false, "bit-basis transfer mismatch"};
        if (!approx_equal(phase, make_phase_state(mat_mul(tp.K_phase, X), cap)))
            return {false, "phase-basis transfer mismatch"};
    }
    return {true, ""};
}

}  // namespace qlnc
