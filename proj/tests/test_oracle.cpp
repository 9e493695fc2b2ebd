#include <doctest.h>

#include <cmath>
#include <complex>

#include "qlnc/oracle.hpp"

using namespace qlnc;

namespace {

Mat from_rows(const FieldCtxPtr& cx, Level lv, std::vector<std::vector<uint64_t>> rows) {
    Mat M(cx, lv, (int)rows.size(), rows.empty() ? 0 : (int)rows[0].size());
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) M.el(i, j) = cx->from_index(lv, rows[i][j]);
    return M;
}

}  // namespace

TEST_SUITE("oracle") {
    TEST_CASE("labels and amplitude indices are inverse maps") {
        auto f4 = FieldCtx::make(2, 2, 1);
        StateVec s(f4, 2, 3, 1 << 16);
        CHECK(s.dim() == 4096);  // 4^(2*3)
        for (uint64_t idx : {0ull, 1ull, 17ull, 4095ull}) {
            Mat X = s.label_of_index(idx);
            CHECK(s.index_of_label(X) == idx);
        }
        // first register entry is the least significant digit
        Mat X(f4, Level::base, 2, 3);
        X.el(0, 0) = f4->from_index(Level::base, 3);
        CHECK(s.index_of_label(X) == 3);
        Mat Y(f4, Level::base, 2, 3);
        Y.el(0, 1) = f4->from_index(Level::base, 1);
        CHECK(s.index_of_label(Y) == 4);
    }

    TEST_CASE("bit states are one-hot and transform by matrix action") {
        auto f2 = FieldCtx::make(2, 1, 1);
        Mat X = from_rows(f2, Level::base, {{1}, {0}});
        StateVec s = make_bit_state(X);
        CHECK(s.dim() == 4);
        CHECK(s.norm() == doctest::Approx(1.0));
        CHECK(s.amp(s.index_of_label(X)) == std::complex<double>(1, 0));

        Mat A = from_rows(f2, Level::base, {{1, 1}, {0, 1}});
        StateVec left = apply_left(s, A);
        CHECK(approx_equal(left, make_bit_state(mat_mul(A, X))));
        // |10> is fixed by this shear, |01> is not
        Mat X2 = from_rows(f2, Level::base, {{0}, {1}});
        StateVec moved = apply_left(make_bit_state(X2), A);
        CHECK(approx_equal(moved, make_bit_state(from_rows(f2, Level::base, {{1}, {1}}))));

        Mat B = from_rows(f2, Level::base, {{1}});
        CHECK(approx_equal(apply_right(s, B), s));
    }

    TEST_CASE("single-qubit phase states are the Hadamard pair") {
        auto f2 = FieldCtx::make(2, 1, 1);
        StateVec plus = make_phase_state(Mat(f2, Level::base, 1, 1));
        CHECK(plus.dim() == 2);
        const double r = 1.0 / std::sqrt(2.0);
        CHECK(plus.amp(0).real() == doctest::Approx(r));
        CHECK(plus.amp(1).real() == doctest::Approx(r));

        StateVec minus = make_phase_state(from_rows(f2, Level::base, {{1}}));
        CHECK(minus.amp(0).real() == doctest::Approx(r));
        CHECK(minus.amp(1).real() == doctest::Approx(-r));
        CHECK(std::abs(inner(plus, minus)) < 1e-12);
    }

    TEST_CASE("phase states form an orthonormal basis") {
        for (auto [p, t, m, n] : {std::array<int, 4>{2, 1, 2, 2}, {3, 1, 1, 2}, {2, 2, 1, 1}}) {
            auto cx = FieldCtx::make((uint64_t)p, (unsigned)t, 1);
            StateVec probe(cx, m, n);
            for (uint64_t zi = 0; zi < probe.dim(); ++zi) {
                StateVec a = make_phase_state(probe.label_of_index(zi));
                CHECK(a.norm() == doctest::Approx(1.0));
                for (uint64_t wi = zi + 1; wi < probe.dim(); ++wi) {
                    StateVec b = make_phase_state(probe.label_of_index(wi));
                    CHECK(std::abs(inner(a, b)) < 1e-9);
                }
            }
        }
    }

    TEST_CASE("comparison ignores a global phase and nothing else") {
        auto f3 = FieldCtx::make(3, 1, 1);
        StateVec a = make_phase_state(from_rows(f3, Level::base, {{1}}));
        StateVec b = a;
        const std::complex<double> w = std::polar(1.0, 1.1);
        for (uint64_t i = 0; i < b.dim(); ++i) b.amp(i) *= w;
        CHECK(approx_equal(a, b));

        b.amp(2) *= std::polar(1.0, 0.3);
        CHECK_FALSE(approx_equal(a, b));

        StateVec c(f3, 1, 1);
        StateVec d(f3, 1, 2);
        CHECK_FALSE(approx_equal(c, d));
    }

    TEST_CASE("bit actions permute phase labels through the transpose inverse") {
        for (auto [p, t, m, n] : {std::array<int, 4>{2, 1, 2, 1}, {2, 1, 1, 2}, {3, 1, 1, 2}}) {
            auto cx = FieldCtx::make((uint64_t)p, (unsigned)t, 1);
            OracleCheck chk = verify_lemma1(cx, m, n);
            CHECK(chk.ok);
            if (!chk.ok) MESSAGE(chk.detail);
        }
        auto f4 = FieldCtx::make(2, 2, 1);
        CHECK(verify_lemma1(f4, 1, 1).ok);
    }

    TEST_CASE("oversized enumerations are refused up front") {
        auto f3 = FieldCtx::make(3, 1, 1);
        CHECK_THROWS_AS(verify_lemma1(f3, 3, 3, 1 << 16), CapExceeded);
        CHECK_THROWS_AS(StateVec(f3, 4, 4, 1 << 16), CapExceeded);
        StateVec tiny(f3, 1, 1, 3);
        CHECK(tiny.dim() == 3);
        CHECK_THROWS_AS(StateVec(f3, 1, 2, 3), CapExceeded);
    }

    TEST_CASE("node-by-node evolution matches the one-shot transfer") {
        NetworkSpec butterfly = builtin_example("butterfly");
        OracleCheck chk = verify_shadow(butterfly, 1);
        CHECK(chk.ok);
        if (!chk.ok) MESSAGE(chk.detail);
    }

    TEST_CASE("an empty network acts as the identity shadow") {
        auto f2 = FieldCtx::make(2, 1, 1);
        NetworkSpec spec;
        spec.ctx = f2;
        spec.pair_sizes = {2};
        spec.validate();
        CHECK(verify_shadow(spec, 2).ok);
    }

    TEST_CASE("random single-node networks pass the shadow check") {
        auto f2 = FieldCtx::make(2, 1, 1);
        Rng rng(41);
        for (int rep = 0; rep < 5; ++rep) {
            NetworkSpec spec;
            spec.ctx = f2;
            spec.pair_sizes = {3};
            NodeOp node;
            node.wires = {0, 1, 2};
            node.matrix = sample_invertible(f2, Level::base, 3, rng);
            spec.nodes.push_back(node);
            spec.validate();
            OracleCheck chk = verify_shadow(spec, 1);
            CHECK(chk.ok);
            if (!chk.ok) MESSAGE(chk.detail);
        }
    }

    TEST_CASE("phase states transform contravariantly under both actions") {
        auto f3 = FieldCtx::make(3, 1, 1);
        Rng rng(43);
        Mat Z = sample_uniform(f3, Level::base, 2, 1, rng);
        Mat A = sample_invertible(f3, Level::base, 2, rng);
        StateVec lhs = apply_left(make_phase_state(Z), A);
        StateVec rhs = make_phase_state(mat_mul(phase_dual(A), Z));
        CHECK(approx_equal(lhs, rhs));

        Mat B = sample_invertible(f3, Level::base, 1, rng);
        StateVec lhs2 = apply_right(make_phase_state(Z), B);
        StateVec rhs2 = make_phase_state(mat_mul(Z, phase_dual(B)));
        CHECK(approx_equal(lhs2, rhs2));
    }
}
