#include "qlnc/codec.hpp"

namespace qlnc {

CodeConfig CodeConfig::make(int pair_index, int m, int a, int a_phase, int64_t n, int alpha) {
    if (m < 1) throw ConfigInvalid("pair size must be positive");
    if (a < 0 || a_phase < 0) throw ConfigInvalid("interference budgets must be nonnegative");
    if (a + a_phase >= m) throw InfeasibleConfig("interference budgets must satisfy a + a' < m");
    if (alpha < 1) throw ConfigInvalid("alpha must be positive");
    if (n <= 0 || n % alpha != 0) throw LengthNotDivisible("n must be a positive multiple of alpha");
    CodeConfig cfg;
    cfg.pair_index = pair_index;
    cfg.m = m;
    cfg.a = a;
    cfg.a_phase = a_phase;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.n_prime = n / alpha;
    if (cfg.n_prime <= 2 * m) throw ConfigInvalid("block length n/alpha must exceed 2m");
    return cfg;
}

CodeRandomness sample_randomness(const FieldCtxPtr& cx, const CodeConfig& cfg, Rng& rng) {
    CodeRandomness rnd;
    rnd.R1 = sample_full_rank(cx, Level::ext, cfg.m - cfg.a, cfg.m, rng);
    rnd.R2 = sample_full_rank(cx, Level::ext, cfg.m - cfg.a_phase, cfg.m, rng);
    rnd.V.reserve(4 * cfg.m);
    for (int i = 0; i < 4 * cfg.m; ++i) rnd.V.push_back(cx->sample(Level::ext, rng));
    rnd.U1 = sample_invertible(cx, Level::ext, cfg.m, rng);
    return rnd;
}

int64_t sr_scalar_count(const CodeConfig& cfg) {
    return (int64_t)cfg.m * (2 * cfg.m - cfg.a - cfg.a_phase + 4);
}

int64_t sr_base_element_count(const CodeConfig& cfg) { return cfg.alpha * sr_scalar_count(cfg); }

BitBranch sample_bit_branch(const FieldCtxPtr& cx, const CodeConfig& cfg, Rng& rng) {
    const int s2 = (int)cfg.n_prime - 2 * cfg.m;
    BitBranch b;
    b.M = sample_uniform(cx, Level::ext, cfg.message_rows(), s2, rng);
    b.E1 = sample_uniform(cx, Level::ext, cfg.m, cfg.m, rng);
    b.E2 = sample_uniform(cx, Level::ext, cfg.a_phase, s2, rng);
    return b;
}

PhaseBranch sample_phase_branch(const FieldCtxPtr& cx, const CodeConfig& cfg, Rng& rng) {
    const int s2 = (int)cfg.n_prime - 2 * cfg.m;
    PhaseBranch b;
    b.M = sample_uniform(cx, Level::ext, cfg.message_rows(), s2, rng);
    b.E1 = sample_uniform(cx, Level::ext, cfg.m, cfg.m, rng);
    b.E2 = sample_uniform(cx, Level::ext, cfg.a, s2, rng);
    return b;
}

namespace {

void check_v(const std::vector<FieldElem>& V, const CodeConfig& cfg) {
    if ((int)V.size() != 4 * cfg.m) throw DimensionMismatch("V must hold 4m scalars");
}

// Q_b[j][k] = V[(b-1)m + k]^(j+1), rows x m
Mat vander_block(const FieldCtxPtr& cx, const std::vector<FieldElem>& V, int b, int rows, int m) {
    Mat Q(cx, Level::ext, rows, m);
    for (int k = 0; k < m; ++k) {
        const FieldElem& v = V[(size_t)(b - 1) * m + k];
        FieldElem p = v;
        for (int j = 0; j < rows; ++j) {
            Q.el(j, k) = p;
            if (j + 1 < rows) p = cx->mul(p, v);
        }
    }
    return Q;
}

// assemble [[I,0,0],[X21,I,X23],[X31,0,I]] with block sizes (m, m, s2)
Mat block_unitriangular(const FieldCtxPtr& cx, int m, int s2, const Mat* x21, const Mat* x23,
                        const Mat* x31) {
    const int n = 2 * m + s2;
    Mat U = Mat::identity(cx, Level::ext, n);
    if (x21)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) U.el(m + i, j) = x21->el(i, j);
    if (x23)
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < s2; ++j) U.el(m + i, 2 * m + j) = x23->el(i, j);
    if (x31)
        for (int i = 0; i < s2; ++i)
            for (int j = 0; j < m; ++j) U.el(2 * m + i, j) = x31->el(i, j);
    return U;
}

}  // namespace

std::vector<Mat> build_u2_factors(const FieldCtxPtr& cx, const std::vector<FieldElem>& V,
                                  const CodeConfig& cfg) {
    check_v(V, cfg);
    const int m = cfg.m, s2 = (int)cfg.n_prime - 2 * m;
    Mat Q1 = vander_block(cx, V, 1, s2, m);
    Mat Q2 = vander_block(cx, V, 2, s2, m);
    Mat Q3 = vander_block(cx, V, 3, m, m);
    Mat Q4 = vander_block(cx, V, 4, m, m);
    Mat q3t_q4 = mat_mul(transpose(Q3), Q4);
    Mat q2t = transpose(Q2);
    std::vector<Mat> f;
    f.push_back(block_unitriangular(cx, m, s2, &q3t_q4, nullptr, nullptr));
    f.push_back(block_unitriangular(cx, m, s2, nullptr, &q2t, nullptr));
    f.push_back(block_unitriangular(cx, m, s2, nullptr, nullptr, &Q1));
    return f;
}

Mat build_u2(const FieldCtxPtr& cx, const std::vector<FieldElem>& V, const CodeConfig& cfg) {
    check_v(V, cfg);
    const int m = cfg.m, s2 = (int)cfg.n_prime - 2 * m;
    Mat Q1 = vander_block(cx, V, 1, s2, m);
    Mat Q2 = vander_block(cx, V, 2, s2, m);
    Mat Q3 = vander_block(cx, V, 3, m, m);
    Mat Q4 = vander_block(cx, V, 4, m, m);
    // product of the three factors in closed form
    Mat x21 = mat_add(mat_mul(transpose(Q3), Q4), mat_mul(transpose(Q2), Q1));
    Mat x23 = transpose(Q2);
    return block_unitriangular(cx, m, s2, &x21, &x23, &Q1);
}

Mat build_u2_inv(const FieldCtxPtr& cx, const std::vector<FieldElem>& V, const CodeConfig& cfg) {
    check_v(V, cfg);
    const int m = cfg.m, s2 = (int)cfg.n_prime - 2 * m;
    Mat Q1 = vander_block(cx, V, 1, s2, m);
    Mat Q2 = vander_block(cx, V, 2, s2, m);
    Mat Q3 = vander_block(cx, V, 3, m, m);
    Mat Q4 = vander_block(cx, V, 4, m, m);
    Mat x21 = mat_neg(mat_mul(transpose(Q3), Q4));
    Mat x23 = mat_neg(transpose(Q2));
    Mat x31 = mat_neg(Q1);
    return block_unitriangular(cx, m, s2, &x21, &x23, &x31);
}

Mat encode_bit(const BitBranch& branch, const CodeRandomness& rnd, const CodeConfig& cfg) {
    const auto& cx = rnd.R1.ctx();
    const int m = cfg.m, s2 = (int)cfg.n_prime - 2 * m;
    Mat A = vstack(Mat(cx, Level::ext, cfg.a, m), rnd.R1);
    Mat C = vstack(vstack(Mat(cx, Level::ext, cfg.a, s2), branch.M), branch.E2);
    Mat S = hstack(hstack(A, branch.E1), C);
    Mat U2 = build_u2(cx, rnd.V, cfg);
    return mat_mul(mat_mul(rnd.U1, S), U2);
}

Mat encode_phase(const PhaseBranch& branch, const CodeRandomness& rnd, const CodeConfig& cfg) {
    const auto& cx = rnd.R2.ctx();
    const int m = cfg.m, s2 = (int)cfg.n_prime - 2 * m;
    Mat B = vstack(rnd.R2, Mat(cx, Level::ext, cfg.a_phase, m));
    Mat C = vstack(vstack(branch.E2, branch.M), Mat(cx, Level::ext, cfg.a_phase, s2));
    Mat S = hstack(hstack(branch.E1, B), C);
    Mat u1_dual = phase_dual(rnd.U1);
    Mat u2_dual = transpose(build_u2_inv(cx, rnd.V, cfg));
    return mat_mul(mat_mul(u1_dual, S), u2_dual);
}

DecodeOutcome decode_bit_with(const Mat& Y, const Mat& R1, const Mat& u2_inv,
                              const CodeConfig& cfg) {
    const auto& cx = Y.ctx();
    const int m = cfg.m;
    if (Y.rows() != m || Y.cols() != cfg.n_prime)
        throw DimensionMismatch("received block has wrong shape");
    Mat Ybar = mat_mul(Y, u2_inv);
    Mat O = slice(Ybar, 0, m, 0, m);
    Mat target = vstack(Mat(cx, Level::ext, cfg.a, m), R1);
    RowMask mask;
    for (int i = 0; i < cfg.a; ++i) mask.zeroed_rows.push_back(i);
    SolveResult sr = solve_projected(O, target, mask);
    DecodeOutcome out;
    out.status = sr.status;
    if (sr.status != SolveStatus::ok) return out;
    Mat rec = mat_mul(sr.D, slice(Ybar, 0, m, 2 * m, (int)cfg.n_prime));
    out.m_hat = slice(rec, cfg.a, m - cfg.a_phase, 0, rec.cols());
    out.e2_hat = slice(rec, m - cfg.a_phase, m, 0, rec.cols());
    return out;
}

DecodeOutcome decode_bit(const Mat& Y, const Mat& R1, const std::vector<FieldElem>& V,
                         const CodeConfig& cfg) {
    return decode_bit_with(Y, R1, build_u2_inv(Y.ctx(), V, cfg), cfg);
}

DecodeOutcome decode_phase_with(const Mat& Y_phase, const Mat& R2, const Mat& u2_tr,
                                const CodeConfig& cfg) {
    const auto& cx = Y_phase.ctx();
    const int m = cfg.m;
    if (Y_phase.rows() != m || Y_phase.cols() != cfg.n_prime)
        throw DimensionMismatch("received block has wrong shape");
    // the mixer's phase companion is (U2^T)^-1, whose inverse is U2^T
    Mat Ybar = mat_mul(Y_phase, u2_tr);
    Mat O = slice(Ybar, 0, m, m, 2 * m);
    Mat target = vstack(R2, Mat(cx, Level::ext, cfg.a_phase, m));
    RowMask mask;
    for (int i = m - cfg.a_phase; i < m; ++i) mask.zeroed_rows.push_back(i);
    SolveResult sr = solve_projected(O, target, mask);
    DecodeOutcome out;
    out.status = sr.status;
    if (sr.status != SolveStatus::ok) return out;
    Mat rec = mat_mul(sr.D, slice(Ybar, 0, m, 2 * m, (int)cfg.n_prime));
    out.m_hat = slice(rec, cfg.a, m - cfg.a_phase, 0, rec.cols());
    out.e2_hat = slice(rec, 0, cfg.a, 0, rec.cols());
    return out;
}

DecodeOutcome decode_phase(const Mat& Y_phase, const Mat& R2, const std::vector<FieldElem>& V,
                           const CodeConfig& cfg) {
    return decode_phase_with(Y_phase, R2, transpose(build_u2(Y_phase.ctx(), V, cfg)), cfg);
}

bool css_membership(const Mat& X, const CodeConfig& cfg, CssSpace space) {
    if (X.rows() != cfg.m) throw DimensionMismatch("membership test needs m rows");
    const auto& cx = *X.ctx();
    auto rows_zero = [&](int r0, int r1) {
        for (int i = r0; i < r1; ++i)
            for (int j = 0; j < X.cols(); ++j)
                if (!cx.is_zero(X.el(i, j))) return false;
        return true;
    };
    switch (space) {
        case CssSpace::c1: return rows_zero(0, cfg.a);
        case CssSpace::c2: return rows_zero(cfg.m - cfg.a_phase, cfg.m);
        case CssSpace::c2_dual: return rows_zero(0, cfg.m - cfg.a_phase);
    }
    return false;
}

}  // namespace qlnc
