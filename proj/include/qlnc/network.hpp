#pragma once

#include <string>
#include <vector>

#include "qlnc/matrix.hpp"

namespace qlnc {

/// One relay operation: an invertible matrix applied to a subset of wires.
/// Wire indices are 0-based and distinct; the matrix is square with one
/// row/column per listed wire, at base level.
struct NodeOp {
    std::vector<int> wires;
    Mat matrix;
};

/// A multiple-unicast network in shadow form: m = sum(pair_sizes) wires,
/// pair i owning the contiguous block starting at pair_offset(i), and a
/// sequence of node operations applied in order.
struct NetworkSpec {
    FieldCtxPtr ctx;
    std::vector<int> pair_sizes;
    std::vector<NodeOp> nodes;

    int total_wires() const;
    int pair_offset(int i) const;
    int pair_count() const { return (int)pair_sizes.size(); }
    /// Throws on out-of-range/duplicate wires, shape mismatches, or a
    /// non-invertible node matrix (SingularNode).
    void validate() const;
    /// Same network bound to another context of the same (p, t, base_poly)
    /// tower, e.g. after choosing the extension degree.
    NetworkSpec with_ctx(FieldCtxPtr new_ctx) const;
};

/// Node operation embedded into the full wire space (identity elsewhere).
Mat embedded_node_matrix(const NetworkSpec& spec, const NodeOp& node);

/// Bit-basis transfer matrix K and its phase companion (K^T)^-1. The phase
/// matrix is computed twice, node-wise and from K directly, and the two
/// routes are required to agree.
struct TransferPair {
    Mat K;
    Mat K_phase;
};

TransferPair compose_transfer(const NetworkSpec& spec);

/// Block of M owned by receiver block i, sender block j.
Mat block(const Mat& M, const std::vector<int>& pair_sizes, int i, int j);
/// Receiver i's rows with its own sender's columns removed: the interference
/// part [M_{i,1} ... M_{i,i-1} M_{i,i+1} ... M_{i,r}].
Mat complement_block(const Mat& M, const std::vector<int>& pair_sizes, int i);

/// Per-pair rank summary. ok means both diagonal blocks have full rank m_i,
/// which every code on this pair assumes.
struct RateRow {
    int m_i = 0;
    int rank_kii = 0;
    int rank_ktii = 0;
    int rank_kic = 0;   // bit-side interference rate a_i
    int rank_ktic = 0;  // phase-side interference rate a_i'
    bool ok = false;
};

std::vector<RateRow> rate_table(const TransferPair& tp, const std::vector<int>& pair_sizes);

/// Schedulability of (a, a_phase) against a pair's rates: transmission needs
/// a + a_phase < m_i; the warnings flag budgets below the observed rates.
struct Feasibility {
    bool feasible = false;
    bool warn_a = false;
    bool warn_aphase = false;
};

Feasibility check_feasible(const RateRow& row, int a, int a_phase);

/// Built-in networks: "butterfly" (two pairs of size 2 over F_2) and
/// "two_way" (two pairs of size 3 over F_3).
NetworkSpec builtin_example(const std::string& name);

/// Single network whose transfer matrix is block upper triangular with the
/// given invertible diagonal blocks; pair 1 receives interference from every
/// other sender through the given first-row blocks.
NetworkSpec one_sender_network(const FieldCtxPtr& ctx, const std::vector<Mat>& diag_blocks,
                               const std::vector<Mat>& interference_blocks);

}  // namespace qlnc
