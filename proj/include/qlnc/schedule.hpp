#pragma once

#include <cstdint>

namespace qlnc {

/// Extension degree chosen for block length n over a size-q base field so
/// that q^alpha >= n^((m+2)/(m-max(a,a_phase))). The smallest divisor of n
/// at or above that threshold is preferred, so n stays unpadded; when even
/// alpha = n falls short, n is padded up to the next multiple.
struct QPrimeChoice {
    int64_t alpha = 1;
    int64_t n_eff = 0;     // n after any padding
    int64_t n_prime = 0;   // n_eff / alpha
    bool padded = false;
    bool small_nprime = false;  // n_prime <= 2m: too short for a schedule
};

QPrimeChoice choose_qprime(int64_t n, uint64_t q, int m, int a, int a_phase);

/// Asymptotic schedule for message length n: outer repetition beta, extension
/// degree alpha, pilot length k, total qubit overhead n1, and the field sizes
/// q1 = q^beta, q2 = q1^m the analysis runs at. p_err_bound evaluates the
/// failure bound k*m/q2 at the asymptotic field size q2 -> (log2 n)^2; the
/// floored integer q1, q2 are reported alongside.
struct ScheduleParams {
    int beta = 0;
    int64_t alpha = 0;
    int64_t k = 0;
    int64_t n1 = 0;
    uint64_t q1 = 0;
    uint64_t q2 = 0;
    bool q_overflow = false;  // q1 or q2 exceeded 64 bits (values saturate)
    double p_err_bound = 0;
    double overhead = 0;  // n1 / n
};

ScheduleParams theorem2_params(uint64_t n, uint64_t q, int m, int a, int a_phase);

/// -1, 0, 1 as a^ae compares to b^be, computed exactly.
int cmp_pow(uint64_t a, unsigned ae, uint64_t b, unsigned be);

}  // namespace qlnc
