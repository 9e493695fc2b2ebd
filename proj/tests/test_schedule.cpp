#include <doctest.h>

#include "qlnc/errors.hpp"
#include "qlnc/schedule.hpp"

using namespace qlnc;

TEST_SUITE("schedule") {
    TEST_CASE("exact power comparison") {
        CHECK(cmp_pow(2, 10, 3, 6) == 1);    // 1024 vs 729
        CHECK(cmp_pow(2, 4, 4, 2) == 0);     // 16 vs 16
        CHECK(cmp_pow(5, 3, 2, 7) == -1);    // 125 vs 128
        CHECK(cmp_pow(2, 64, 3, 40) == 1);   // past 63 bits
        CHECK(cmp_pow(2, 128, 5, 64) == -1); // multi-limb on both sides
        CHECK(cmp_pow(10, 20, 10, 20) == 0);
        CHECK(cmp_pow(5, 0, 7, 0) == 0);
    }

    TEST_CASE("extension degree picks the smallest fitting divisor") {
        QPrimeChoice c = choose_qprime(64, 2, 2, 1, 0);
        CHECK(c.alpha == 32);  // need 2^alpha >= 64^4, divisors of 64: 32 is first
        CHECK(c.n_eff == 64);
        CHECK(c.n_prime == 2);
        CHECK_FALSE(c.padded);
        CHECK(c.small_nprime);  // 2 <= 2m

        c = choose_qprime(27, 3, 1, 0, 0);
        CHECK(c.alpha == 9);  // 3^9 = 27^3 exactly
        CHECK(c.n_prime == 3);
        CHECK_FALSE(c.padded);
        CHECK_FALSE(c.small_nprime);

        c = choose_qprime(4096, 2, 2, 1, 0);
        CHECK(c.alpha == 64);  // threshold is 48, next divisor up is 64
        CHECK(c.n_prime == 64);
        CHECK_FALSE(c.small_nprime);

        c = choose_qprime(10, 2, 1, 0, 0);
        CHECK(c.alpha == 10);  // 2^10 = 1024 >= 10^3, n itself is the divisor
        CHECK(c.n_prime == 1);
        CHECK_FALSE(c.padded);
    }

    TEST_CASE("block lengths that cannot host the degree get padded") {
        QPrimeChoice c = choose_qprime(4, 2, 2, 1, 0);
        CHECK(c.alpha == 8);  // need 2^alpha >= 4^4 = 2^8
        CHECK(c.n_eff == 8);
        CHECK(c.n_prime == 1);
        CHECK(c.padded);
        CHECK(c.small_nprime);

        c = choose_qprime(9, 2, 1, 0, 0);
        CHECK(c.alpha == 10);  // 2^9 = 512 < 729 = 9^3
        CHECK(c.n_eff == 10);
        CHECK(c.padded);
    }

    TEST_CASE("extension degree rejects bad inputs") {
        CHECK_THROWS_AS(choose_qprime(0, 2, 1, 0, 0), ConfigInvalid);
        CHECK_THROWS_AS(choose_qprime(8, 1, 1, 0, 0), ConfigInvalid);
        CHECK_THROWS_AS(choose_qprime(8, 2, 0, 0, 0), ConfigInvalid);
        CHECK_THROWS_AS(choose_qprime(8, 2, 2, 2, 0), InfeasibleConfig);
    }

    TEST_CASE("asymptotic schedule for the million-qubit block") {
        ScheduleParams sp = theorem2_params(1ull << 20, 2, 3, 1, 1);
        CHECK(sp.beta == 2);
        CHECK(sp.alpha == 100);
        CHECK(sp.k == 2400);
        CHECK(sp.n1 == 43200);
        CHECK(sp.q1 == 4);
        CHECK(sp.q2 == 64);
        CHECK_FALSE(sp.q_overflow);
        CHECK(sp.p_err_bound == doctest::Approx(18.0));
        CHECK(sp.overhead == doctest::Approx(43200.0 / (double)(1ull << 20)));
    }

    TEST_CASE("failure bound and overhead shrink as the block grows") {
        ScheduleParams s20 = theorem2_params(1ull << 20, 2, 3, 1, 1);
        ScheduleParams s30 = theorem2_params(1ull << 30, 2, 3, 1, 1);
        ScheduleParams s40 = theorem2_params(1ull << 40, 2, 3, 1, 1);
        CHECK(s30.p_err_bound == doctest::Approx(12.0));
        CHECK(s40.p_err_bound == doctest::Approx(9.0));
        CHECK(s20.p_err_bound > s30.p_err_bound);
        CHECK(s30.p_err_bound > s40.p_err_bound);
        CHECK(s20.overhead > s30.overhead);
        CHECK(s30.overhead > s40.overhead);
        // the repetition count and field sizes grow alongside
        CHECK(s30.beta == 3);
        CHECK(s30.q1 == 8);
        CHECK(s30.q2 == 512);
        CHECK(s40.alpha == 200);
        CHECK(s40.k == 4800);
    }

    TEST_CASE("asymptotic schedule rejects undersized blocks") {
        CHECK_THROWS_AS(theorem2_params(3, 2, 3, 1, 1), NTooSmall);
        // n = 4 passes the floor but the outer repetition rounds to zero
        CHECK_THROWS_AS(theorem2_params(4, 2, 3, 1, 1), NTooSmall);
        CHECK_THROWS_AS(theorem2_params(1ull << 20, 2, 3, 2, 1), InfeasibleConfig);
        CHECK_THROWS_AS(theorem2_params(1ull << 20, 1, 3, 1, 1), ConfigInvalid);
    }
}
