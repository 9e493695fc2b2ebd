#include "qlnc/network.hpp"

#include <numeric>

namespace qlnc {

int NetworkSpec::total_wires() const {
    return std::accumulate(pair_sizes.begin(), pair_sizes.end(), 0);
}

int NetworkSpec::pair_offset(int i) const {
    if (i < 0 || i >= pair_count()) throw IndexOutOfRange("pair index out of range");
    return std::accumulate(pair_sizes.begin(), pair_sizes.begin() + i, 0);
}

void NetworkSpec::validate() const {
    if (!ctx) throw ConfigInvalid("network without field context");
    if (pair_sizes.empty()) throw ConfigInvalid("network needs at least one pair");
    for (int m : pair_sizes)
        if (m < 1) throw ConfigInvalid("pair sizes must be positive");
    const int m = total_wires();
    for (const auto& node : nodes) {
        const int k = (int)node.wires.size();
        if (k < 1) throw ConfigInvalid("node operates on no wires");
        std::vector<bool> seen(m, false);
        for (int w : node.wires) {
            if (w < 0 || w >= m) throw IndexOutOfRange("node wire out of range");
            if (seen[w]) throw ConfigInvalid("node wires must be distinct");
            seen[w] = true;
        }
        if (node.matrix.rows() != k || node.matrix.cols() != k)
            throw DimensionMismatch("node matrix shape must match its wire count");
        if (node.matrix.level() != Level::base)
            throw LevelMismatch("node matrices live at base level");
        if (!node.matrix.ctx()->same_tower(*ctx))
            throw LevelMismatch("node matrix from a different tower");
        if (rank(node.matrix) != k) throw SingularNode("node matrix is not invertible");
    }
}

NetworkSpec NetworkSpec::with_ctx(FieldCtxPtr new_ctx) const {
    if (new_ctx->p() != ctx->p() || new_ctx->t() != ctx->t() ||
        new_ctx->base_poly() != ctx->base_poly())
        throw ConfigInvalid("context change must preserve the base field");
    NetworkSpec out;
    out.ctx = new_ctx;
    out.pair_sizes = pair_sizes;
    out.nodes.reserve(nodes.size());
    for (const auto& node : nodes) {
        Mat m(new_ctx, Level::base, node.matrix.rows(), node.matrix.cols());
        for (int i = 0; i < m.rows(); ++i)
            for (int j = 0; j < m.cols(); ++j) {
                FieldElem e = node.matrix.el(i, j);
                m.el(i, j) = new_ctx->from_coeffs(Level::base, e.c);
            }
        out.nodes.push_back(NodeOp{node.wires, std::move(m)});
    }
    return out;
}

Mat embedded_node_matrix(const NetworkSpec& spec, const NodeOp& node) {
    const int m = spec.total_wires();
    Mat E = Mat::identity(spec.ctx, Level::base, m);
    const int k = (int)node.wires.size();
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) E.el(node.wires[r], node.wires[c]) = node.matrix.el(r, c);
    return E;
}

TransferPair compose_transfer(const NetworkSpec& spec) {
    spec.validate();
    const int m = spec.total_wires();
    Mat K = Mat::identity(spec.ctx, Level::base, m);
    Mat Kp = Mat::identity(spec.ctx, Level::base, m);
    for (const auto& node : spec.nodes) {
        Mat E = embedded_node_matrix(spec, node);
        K = mat_mul(E, K);
        Kp = mat_mul(phase_dual(E), Kp);
    }
    if (!(Kp == phase_dual(K)))
        throw Error("phase transfer disagrees between node-wise and direct computation");
    return TransferPair{std::move(K), std::move(Kp)};
}

Mat block(const Mat& M, const std::vector<int>& pair_sizes, int i, int j) {
    const int r = (int)pair_sizes.size();
    if (i < 0 || i >= r || j < 0 || j >= r) throw IndexOutOfRange("pair index out of range");
    int r0 = std::accumulate(pair_sizes.begin(), pair_sizes.begin() + i, 0);
    int c0 = std::accumulate(pair_sizes.begin(), pair_sizes.begin() + j, 0);
    return slice(M, r0, r0 + pair_sizes[i], c0, c0 + pair_sizes[j]);
}

Mat complement_block(const Mat& M, const std::vector<int>& pair_sizes, int i) {
    const int r = (int)pair_sizes.size();
    if (i < 0 || i >= r) throw IndexOutOfRange("pair index out of range");
    int r0 = std::accumulate(pair_sizes.begin(), pair_sizes.begin() + i, 0);
    int c0 = r0 + pair_sizes[i];
    Mat left = slice(M, r0, r0 + pair_sizes[i], 0, r0);
    Mat right = slice(M, r0, r0 + pair_sizes[i], c0, M.cols());
    return hstack(left, right);
}

std::vector<RateRow> rate_table(const TransferPair& tp, const std::vector<int>& pair_sizes) {
    std::vector<RateRow> out;
    for (int i = 0; i < (int)pair_sizes.size(); ++i) {
        RateRow row;
        row.m_i = pair_sizes[i];
        row.rank_kii = rank(block(tp.K, pair_sizes, i, i));
        row.rank_ktii = rank(block(tp.K_phase, pair_sizes, i, i));
        row.rank_kic = rank(complement_block(tp.K, pair_sizes, i));
        row.rank_ktic = rank(complement_block(tp.K_phase, pair_sizes, i));
        row.ok = row.rank_kii == row.m_i && row.rank_ktii == row.m_i;
        out.push_back(row);
    }
    return out;
}

Feasibility check_feasible(const RateRow& row, int a, int a_phase) {
    Feasibility f;
    f.feasible = a >= 0 && a_phase >= 0 && a + a_phase < row.m_i;
    f.warn_a = a < row.rank_kic;
    f.warn_aphase = a_phase < row.rank_ktic;
    return f;
}

NetworkSpec builtin_example(const std::string& name) {
    if (name == "butterfly") {
        // two size-2 pairs over F_2; the middle wires share one relay
        auto cx = FieldCtx::make(2, 1, 1);
        NetworkSpec spec;
        spec.ctx = cx;
        spec.pair_sizes = {2, 2};
        Mat a(cx, Level::base, 2, 2);
        a.el(0, 0) = cx->one(Level::base);
        a.el(0, 1) = cx->one(Level::base);
        a.el(1, 1) = cx->one(Level::base);
        spec.nodes.push_back(NodeOp{{1, 2}, std::move(a)});
        spec.validate();
        return spec;
    }
    if (name == "two_way") {
        // two size-3 pairs over F_3 exchanging traffic in both directions
        auto cx = FieldCtx::make(3, 1, 1);
        NetworkSpec spec;
        spec.ctx = cx;
        spec.pair_sizes = {3, 3};
        Mat k(cx, Level::base, 6, 6);
        const int64_t rows[6][6] = {
            {1, 0, 0, 1, 0, 0}, {0, 1, 0, 0, 0, 0},  {0, 0, 1, 0, 0, 0},
            {-1, 0, 0, 1, 0, 0}, {0, 0, 0, 0, 1, 0}, {0, 0, 0, 0, 0, 1},
        };
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j)
                k.el(i, j) = cx->from_coeffs(Level::base, {(uint64_t)((rows[i][j] + 3) % 3)});
        std::vector<int> wires(6);
        std::iota(wires.begin(), wires.end(), 0);
        spec.nodes.push_back(NodeOp{std::move(wires), std::move(k)});
        spec.validate();
        return spec;
    }
    throw ParseError("unknown built-in network: " + name);
}

NetworkSpec one_sender_network(const FieldCtxPtr& ctx, const std::vector<Mat>& diag_blocks,
                               const std::vector<Mat>& interference_blocks) {
    const int r = (int)diag_blocks.size();
    if (r < 2) throw InvalidBlocks("need at least two pairs");
    if ((int)interference_blocks.size() != r - 1)
        throw InvalidBlocks("need one interference block per pair after the first");
    NetworkSpec spec;
    spec.ctx = ctx;
    for (const auto& d : diag_blocks) {
        if (d.rows() != d.cols()) throw InvalidBlocks("diagonal blocks must be square");
        spec.pair_sizes.push_back(d.rows());
    }
    const int m = spec.total_wires();
    Mat K(ctx, Level::base, m, m);
    int off = 0;
    for (int j = 0; j < r; ++j) {
        const Mat& d = diag_blocks[j];
        if (rank(d) != d.rows()) throw InvalidBlocks("diagonal blocks must be invertible");
        for (int i = 0; i < d.rows(); ++i)
            for (int c = 0; c < d.cols(); ++c) K.el(off + i, off + c) = d.el(i, c);
        if (j > 0) {
            const Mat& f = interference_blocks[j - 1];
            if (f.rows() != spec.pair_sizes[0] || f.cols() != spec.pair_sizes[j])
                throw InvalidBlocks("interference block shape mismatch");
            for (int i = 0; i < f.rows(); ++i)
                for (int c = 0; c < f.cols(); ++c) K.el(i, off + c) = f.el(i, c);
        }
        off += d.rows();
    }
    std::vector<int> wires(m);
    std::iota(wires.begin(), wires.end(), 0);
    spec.nodes.push_back(NodeOp{std::move(wires), std::move(K)});
    spec.validate();
    return spec;
}

}  // namespace qlnc
