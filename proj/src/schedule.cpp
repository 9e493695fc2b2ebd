#include "qlnc/schedule.hpp"

#include <cmath>
#include <vector>

#include "qlnc/errors.hpp"

namespace qlnc {

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

// minimal unsigned bignum, little-endian 64-bit limbs
struct BigU {
    std::vector<u64> limbs;

    static BigU from(u64 v) { return BigU{{v}}; }

    void mul_u64(u64 f) {
        u128 carry = 0;
        for (auto& l : limbs) {
            u128 cur = (u128)l * f + carry;
            l = (u64)cur;
            carry = cur >> 64;
        }
        while (carry) {
            limbs.push_back((u64)carry);
            carry >>= 64;
        }
        while (limbs.size() > 1 && limbs.back() == 0) limbs.pop_back();
    }

    static BigU pow(u64 base, unsigned exp) {
        BigU r = from(1);
        for (unsigned i = 0; i < exp; ++i) r.mul_u64(base);
        return r;
    }

    int cmp(const BigU& o) const {
        if (limbs.size() != o.limbs.size()) return limbs.size() < o.limbs.size() ? -1 : 1;
        for (size_t i = limbs.size(); i-- > 0;)
            if (limbs[i] != o.limbs[i]) return limbs[i] < o.limbs[i] ? -1 : 1;
        return 0;
    }
};

}  // namespace

int cmp_pow(uint64_t a, unsigned ae, uint64_t b, unsigned be) {
    return BigU::pow(a, ae).cmp(BigU::pow(b, be));
}

QPrimeChoice choose_qprime(int64_t n, uint64_t q, int m, int a, int a_phase) {
    if (n < 1) throw ConfigInvalid("n must be positive");
    if (q < 2) throw ConfigInvalid("q must be a prime power, at least 2");
    if (m < 1) throw ConfigInvalid("m must be positive");
    const int amax = a > a_phase ? a : a_phase;
    if (amax >= m) throw InfeasibleConfig("interference budget must stay below m");
    // smallest alpha0 with q^(alpha0 * (m - amax)) >= n^(m + 2)
    int64_t alpha0 = 1;
    while (cmp_pow(q, (unsigned)(alpha0 * (m - amax)), (u64)n, (unsigned)(m + 2)) < 0) ++alpha0;

    QPrimeChoice out;
    if (alpha0 <= n) {
        int64_t alpha = n;
        for (int64_t d = 1; d * d <= n; ++d) {
            if (n % d) continue;
            if (d >= alpha0 && d < alpha) alpha = d;
            int64_t e = n / d;
            if (e >= alpha0 && e < alpha) alpha = e;
        }
        out.alpha = alpha;
        out.n_eff = n;
        out.padded = false;
    } else {
        out.alpha = alpha0;
        out.n_eff = (n + alpha0 - 1) / alpha0 * alpha0;
        out.padded = true;
    }
    out.n_prime = out.n_eff / out.alpha;
    out.small_nprime = out.n_prime <= 2 * m;
    return out;
}

ScheduleParams theorem2_params(uint64_t n, uint64_t q, int m, int a, int a_phase) {
    if (q < 2) throw ConfigInvalid("q must be a prime power, at least 2");
    if (m < 1 || a < 0 || a_phase < 0 || a + a_phase >= m)
        throw InfeasibleConfig("need 0 <= a, a' and a + a' < m");
    if (n < 4) throw NTooSmall("n too small for a schedule");

    const long double l2n = log2l((long double)n);
    const long double l2q = log2l((long double)q);
    int beta = (int)floorl(2.0L * log2l(l2n) / ((long double)m * l2q));
    if (beta < 1) throw NTooSmall("n too small: outer repetition would be zero");

    // alpha = floor((m+2) log_q n): largest alpha with q^alpha <= n^(m+2)
    int64_t alpha = 1;
    while (cmp_pow(q, (unsigned)(alpha + 1), n, (unsigned)(m + 2)) <= 0) ++alpha;

    const int64_t c0 = (int64_t)m * (2 * m - a - a_phase + 4);
    int64_t k;
    if ((q & (q - 1)) == 0) {
        // q = 2^s: k is an exact integer
        unsigned s = 0;
        for (u64 v = q; v > 1; v >>= 1) ++s;
        k = c0 * alpha * s;
    } else {
        k = (int64_t)ceill((long double)c0 * (long double)alpha * l2q - 1e-9L);
    }
    const int64_t n1 = (int64_t)m * (m - a_phase + 1) * k * beta;

    ScheduleParams out;
    out.beta = beta;
    out.alpha = alpha;
    out.k = k;
    out.n1 = n1;
    u128 q1 = 1;
    for (int i = 0; i < beta; ++i) {
        q1 *= q;
        if (q1 > ~0ull) {
            out.q_overflow = true;
            q1 = ~0ull;
            break;
        }
    }
    u128 q2 = 1;
    for (int i = 0; i < m && !out.q_overflow; ++i) {
        q2 *= (u64)q1;
        if (q2 > ~0ull) {
            out.q_overflow = true;
            q2 = ~0ull;
            break;
        }
    }
    out.q1 = (u64)q1;
    out.q2 = out.q_overflow ? ~0ull : (u64)q2;
    out.p_err_bound = (double)((long double)k * m / (l2n * l2n));
    out.overhead = (double)((long double)n1 / (long double)n);
    return out;
}

}  // namespace qlnc
