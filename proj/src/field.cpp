#include "qlnc/field.hpp"

#include <algorithm>
#include <cstring>
#include <string>

namespace qlnc {

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

u64 mulmod_u64(u64 a, u64 b, u64 m) { return (u64)((u128)a * b % m); }

u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % d == 0) return n == d;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

u64 inv_mod_prime(u64 a, u64 p) {
    if (a == 0) throw DivisionByZero("inverse of zero");
    // extended euclid on (a, p)
    int64_t t0 = 0, t1 = 1;
    u64 r0 = p, r1 = a;
    while (r1 != 0) {
        u64 q = r0 / r1;
        u64 r2 = r0 - q * r1;
        int64_t t2 = t0 - (int64_t)q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    int64_t v = t0 % (int64_t)p;
    if (v < 0) v += (int64_t)p;
    return (u64)v;
}

// ---- packed GF(2) polynomials: bit i of the word array = coefficient of x^i

size_t words_for(unsigned bits) { return (bits + 63) / 64; }

bool bit_get(const std::vector<u64>& w, unsigned i) { return (w[i >> 6] >> (i & 63)) & 1; }

void bit_xor_shifted(std::vector<u64>& acc, const std::vector<u64>& src, unsigned nbits,
                     unsigned shift) {
    unsigned ws = shift >> 6, bs = shift & 63;
    size_t nw = words_for(nbits);
    for (size_t i = 0; i < nw; ++i) {
        u64 v = src[i];
        if (v == 0) continue;
        acc[i + ws] ^= v << bs;
        if (bs && i + ws + 1 < acc.size()) acc[i + ws + 1] ^= v >> (64 - bs);
    }
}

// carry-less product of a (na bits) and b (nb bits), result na+nb-1 bits
std::vector<u64> clmul(const std::vector<u64>& a, unsigned na, const std::vector<u64>& b,
                       unsigned nb) {
    std::vector<u64> out(words_for(na + nb), 0);
    for (unsigned i = 0; i < na; ++i)
        if (bit_get(a, i)) bit_xor_shifted(out, b, nb, i);
    return out;
}

// reduce r (nr bits) by monic mod of degree d (d+1 bits), in place
void clreduce(std::vector<u64>& r, unsigned nr, const std::vector<u64>& mod, unsigned d) {
    for (unsigned i = nr; i-- > d;)
        if (bit_get(r, i)) bit_xor_shifted(r, mod, d + 1, i - d);
}

std::vector<u64> pack_bits(std::span<const u64> coeffs) {
    std::vector<u64> out(words_for((unsigned)coeffs.size()), 0);
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] & 1) out[i >> 6] |= 1ull << (i & 63);
    return out;
}

void unpack_bits(const std::vector<u64>& bits, std::span<u64> out) {
    for (size_t i = 0; i < out.size(); ++i) out[i] = bit_get(bits, (unsigned)i) ? 1 : 0;
}

}  // namespace

// Kernel access for the polynomial templates below.
struct FieldKernelAccess {
    static void bmul(const FieldCtx& c, std::span<const u64> a, std::span<const u64> b,
                     std::span<u64> out, bool packed) {
        c.bmul(a, b, out, packed);
    }
    static void binv(const FieldCtx& c, std::span<const u64> a, std::span<u64> out) {
        c.binv(a, out);
    }
};

namespace {

// Coefficient-field adapters for the generic polynomial routines. Both operate
// on fixed-width word blocks.
struct PrimeOps {
    u64 p;
    unsigned w() const { return 1; }
    void add(const u64* a, const u64* b, u64* o) const { o[0] = (a[0] + b[0]) % p; }
    void sub(const u64* a, const u64* b, u64* o) const { o[0] = (a[0] + p - b[0]) % p; }
    void mul(const u64* a, const u64* b, u64* o) const { o[0] = mulmod_u64(a[0], b[0], p); }
    void inv(const u64* a, u64* o) const { o[0] = inv_mod_prime(a[0], p); }
    bool is_zero(const u64* a) const { return a[0] == 0; }
    void set_zero(u64* o) const { o[0] = 0; }
    void set_one(u64* o) const { o[0] = 1; }
    void from_index(u64 idx, u64* o) const { o[0] = idx; }
    u64 csize_capped() const { return p; }
};

struct BaseOps {
    const FieldCtx* cx;
    bool allow_packed = true;
    unsigned w() const { return cx->t(); }
    void add(const u64* a, const u64* b, u64* o) const {
        for (unsigned i = 0; i < w(); ++i) o[i] = (a[i] + b[i]) % cx->p();
    }
    void sub(const u64* a, const u64* b, u64* o) const {
        for (unsigned i = 0; i < w(); ++i) o[i] = (a[i] + cx->p() - b[i]) % cx->p();
    }
    void mul(const u64* a, const u64* b, u64* o) const {
        FieldKernelAccess::bmul(*cx, {a, w()}, {b, w()}, {o, w()}, allow_packed);
    }
    void inv(const u64* a, u64* o) const { FieldKernelAccess::binv(*cx, {a, w()}, {o, w()}); }
    bool is_zero(const u64* a) const {
        for (unsigned i = 0; i < w(); ++i)
            if (a[i]) return false;
        return true;
    }
    void set_zero(u64* o) const { std::fill_n(o, w(), 0); }
    void set_one(u64* o) const {
        std::fill_n(o, w(), 0);
        o[0] = 1;
    }
    void from_index(u64 idx, u64* o) const {
        for (unsigned i = 0; i < w(); ++i) {
            o[i] = idx % cx->p();
            idx /= cx->p();
        }
    }
    u64 csize_capped() const {
        double s = 1;
        for (unsigned i = 0; i < w(); ++i) s *= (double)cx->p();
        return s > 9e18 ? ~0ull : (u64)s;
    }
};

// ---- generic dense polynomials over an abstract coefficient field.
// Stored as concatenated blocks, block i = coefficient of x^i.

template <class Ops>
int pdeg(const Ops& K, const std::vector<u64>& a) {
    unsigned w = K.w();
    for (int i = (int)(a.size() / w) - 1; i >= 0; --i)
        if (!K.is_zero(&a[(size_t)i * w])) return i;
    return -1;
}

template <class Ops>
std::vector<u64> pconv(const Ops& K, const std::vector<u64>& a, const std::vector<u64>& b) {
    unsigned w = K.w();
    size_t la = a.size() / w, lb = b.size() / w;
    std::vector<u64> out((la + lb - 1) * w, 0);
    std::vector<u64> tmp(w);
    for (size_t i = 0; i < la; ++i) {
        if (K.is_zero(&a[i * w])) continue;
        for (size_t j = 0; j < lb; ++j) {
            if (K.is_zero(&b[j * w])) continue;
            K.mul(&a[i * w], &b[j * w], tmp.data());
            K.add(&out[(i + j) * w], tmp.data(), &out[(i + j) * w]);
        }
    }
    return out;
}

// reduce by monic mod (leading block must be one), in place
template <class Ops>
void preduce(const Ops& K, std::vector<u64>& r, const std::vector<u64>& mod) {
    unsigned w = K.w();
    size_t md = mod.size() / w - 1;
    std::vector<u64> tmp(w), c(w);
    for (size_t i = r.size() / w; i-- > md;) {
        if (K.is_zero(&r[i * w])) continue;
        std::copy_n(&r[i * w], w, c.data());
        K.set_zero(&r[i * w]);
        for (size_t j = 0; j < md; ++j) {
            if (K.is_zero(&mod[j * w])) continue;
            K.mul(c.data(), &mod[j * w], tmp.data());
            K.sub(&r[(i - md + j) * w], tmp.data(), &r[(i - md + j) * w]);
        }
    }
    r.resize(md * w);
}

template <class Ops>
std::vector<u64> pmulmod(const Ops& K, const std::vector<u64>& a, const std::vector<u64>& b,
                         const std::vector<u64>& mod) {
    auto r = pconv(K, a, b);
    preduce(K, r, mod);
    return r;
}

// division with remainder; den need not be monic
template <class Ops>
void pdivrem(const Ops& K, std::vector<u64> num, const std::vector<u64>& den,
             std::vector<u64>& q, std::vector<u64>& rem) {
    unsigned w = K.w();
    int dd = pdeg(K, den);
    int dn = pdeg(K, num);
    q.assign((size_t)std::max(dn - dd + 1, 1) * w, 0);
    if (dd < 0) throw DivisionByZero("polynomial division by zero");
    std::vector<u64> linv(w), c(w), tmp(w);
    K.inv(&den[(size_t)dd * w], linv.data());
    while (dn >= dd) {
        K.mul(&num[(size_t)dn * w], linv.data(), c.data());
        size_t k = (size_t)(dn - dd);
        std::copy_n(c.data(), w, &q[k * w]);
        for (int j = 0; j <= dd; ++j) {
            if (K.is_zero(&den[(size_t)j * w])) continue;
            K.mul(c.data(), &den[(size_t)j * w], tmp.data());
            K.sub(&num[(k + j) * w], tmp.data(), &num[(k + j) * w]);
        }
        dn = pdeg(K, num);
    }
    rem = std::move(num);
}

// inverse of a modulo mod (monic, irreducible); a reduced, nonzero
template <class Ops>
std::vector<u64> pinvmod(const Ops& K, const std::vector<u64>& a, const std::vector<u64>& mod) {
    unsigned w = K.w();
    if (pdeg(K, a) < 0) throw DivisionByZero("inverse of zero");
    std::vector<u64> r0 = mod, r1 = a;
    std::vector<u64> t0(w, 0), t1(w, 0);
    K.set_one(t1.data());
    std::vector<u64> q, rem;
    while (pdeg(K, r1) > 0) {
        pdivrem(K, r0, r1, q, rem);
        // t2 = t0 - q*t1
        auto qt = pconv(K, q, t1);
        size_t n = std::max(qt.size(), t0.size());
        t0.resize(n, 0);
        qt.resize(n, 0);
        for (size_t i = 0; i < n / w; ++i) K.sub(&t0[i * w], &qt[i * w], &t0[i * w]);
        std::swap(t0, t1);
        r0 = std::move(r1);
        r1 = std::move(rem);
    }
    if (pdeg(K, r1) < 0) throw DivisionByZero("element not invertible");
    std::vector<u64> cinv(w);
    K.inv(&r1[0], cinv.data());
    // out = t1 * cinv mod
    std::vector<u64> cpoly(cinv);
    auto out = pconv(K, t1, cpoly);
    // may exceed deg(mod)-1 after the loop; reduce
    size_t md = mod.size() / w - 1;
    if (out.size() / w > md)
        preduce(K, out, mod);
    out.resize(md * w, 0);
    return out;
}

template <class Ops>
bool pgcd_is_const(const Ops& K, std::vector<u64> a, std::vector<u64> b) {
    std::vector<u64> q, rem;
    while (pdeg(K, b) >= 0) {
        pdivrem(K, a, b, q, rem);
        a = std::move(b);
        b = std::move(rem);
    }
    return pdeg(K, a) == 0;
}

// Rabin's irreducibility test for monic f of degree d over a coefficient
// field of size p^tau. Frobenius powers are taken as repeated p-th powers.
template <class Ops>
bool pirreducible(const Ops& K, const std::vector<u64>& f, u64 p, unsigned tau) {
    unsigned w = K.w();
    int d = pdeg(K, f);
    if (d < 1) return false;
    std::vector<u64> x(2 * w, 0);
    K.set_one(&x[w]);
    if (d == 1) return true;
    std::vector<int> prime_divs;
    {
        int m = d;
        for (int l = 2; l * l <= m; ++l)
            if (m % l == 0) {
                prime_divs.push_back(l);
                while (m % l == 0) m /= l;
            }
        if (m > 1) prime_divs.push_back(m);
    }
    std::vector<u64> xr = x;
    preduce(K, xr, f);
    std::vector<u64> u = xr;  // x^(s^0)
    for (int j = 1; j <= d; ++j) {
        for (unsigned s = 0; s < tau; ++s) {
            // u = u^p mod f
            std::vector<u64> acc((size_t)w, 0);
            std::vector<u64> base = u;
            bool first = true;
            u64 e = p;
            while (e) {
                if (e & 1) {
                    if (first) {
                        acc = base;
                        first = false;
                    } else {
                        acc = pmulmod(K, acc, base, f);
                    }
                }
                e >>= 1;
                if (e) base = pmulmod(K, base, base, f);
            }
            u = std::move(acc);
        }
        for (int l : prime_divs) {
            if (j == d / l) {
                // gcd(u - x, f) must be constant; a zero difference means
                // f divides x^(s^j) - x, i.e. every factor is small: reject
                auto diff = u;
                diff.resize(std::max(diff.size(), xr.size()), 0);
                for (size_t i = 0; i < xr.size() / w; ++i)
                    K.sub(&diff[i * w], &xr[i * w], &diff[i * w]);
                if (pdeg(K, diff) < 0 || !pgcd_is_const(K, f, diff)) return false;
            }
        }
    }
    // x^(s^d) == x required
    return u == xr;
}

// first monic irreducible of degree d in coefficient-vector index order
template <class Ops>
std::vector<u64> canonical_modulus(const Ops& K, unsigned d, u64 p, unsigned tau) {
    unsigned w = K.w();
    u64 s = K.csize_capped();
    for (u64 idx = 0;; ++idx) {
        if (idx > (1ull << 22)) throw Error("irreducible modulus search exhausted");
        std::vector<u64> f((size_t)(d + 1) * w, 0);
        u64 rest = idx;
        bool overflow = false;
        for (unsigned i = 0; i < d; ++i) {
            K.from_index(rest % s, &f[(size_t)i * w]);
            rest /= s;
        }
        if (rest != 0) overflow = true;
        if (overflow) throw FieldTooLarge("no irreducible modulus found in range");
        K.set_one(&f[(size_t)d * w]);
        if (pirreducible(K, f, p, tau)) return f;
    }
}

}  // namespace

// ---------------------------------------------------------------------------

void FieldCtx::check_level(const FieldElem& x, Level lv) const {
    if (x.level != lv) throw LevelMismatch("element level does not match operation level");
    if (x.c.size() != width(lv)) throw DimensionMismatch("element width corrupt");
}

unsigned FieldCtx::width(Level lv) const {
    switch (lv) {
        case Level::prime: return 1;
        case Level::base: return t_;
        case Level::ext: return alpha_ * t_;
    }
    return 1;
}

double FieldCtx::size_approx(Level lv) const {
    double s = 1;
    for (unsigned i = 0; i < width(lv); ++i) s *= (double)p_;
    return s;
}

bool FieldCtx::size_fits_u64(Level lv) const {
    u128 s = 1;
    for (unsigned i = 0; i < width(lv); ++i) {
        s *= p_;
        if (s > ~0ull) return false;
    }
    return true;
}

uint64_t FieldCtx::size_u64(Level lv) const {
    if (!size_fits_u64(lv)) throw FieldTooLarge("field size exceeds 64 bits");
    u64 s = 1;
    for (unsigned i = 0; i < width(lv); ++i) s *= p_;
    return s;
}

bool FieldCtx::same_tower(const FieldCtx& o) const {
    return p_ == o.p_ && t_ == o.t_ && alpha_ == o.alpha_ && base_poly_ == o.base_poly_ &&
           ext_poly_ == o.ext_poly_;
}

std::shared_ptr<const FieldCtx> FieldCtx::make(uint64_t p, unsigned t, unsigned alpha) {
    return make(p, t, alpha, {}, {});
}

std::shared_ptr<const FieldCtx> FieldCtx::make(uint64_t p, unsigned t, unsigned alpha,
                                               std::vector<uint64_t> base_poly,
                                               std::vector<std::vector<uint64_t>> ext_poly) {
    if (!is_prime_u64(p)) throw ConfigInvalid("p must be prime");
    if (p >= (1ull << 62)) throw FieldTooLarge("p too large");
    if (t < 1 || alpha < 1) throw ConfigInvalid("t and alpha must be positive");
    if ((uint64_t)t * alpha > 4096) throw FieldTooLarge("tower degree too large");

    auto cx = std::shared_ptr<FieldCtx>(new FieldCtx());
    cx->p_ = p;
    cx->t_ = t;
    cx->alpha_ = alpha;

    PrimeOps pops{p};
    if (base_poly.empty()) {
        cx->base_poly_ = canonical_modulus(pops, t, p, 1);
    } else {
        if (base_poly.size() != (size_t)t + 1) throw ConfigInvalid("base_poly must have degree t");
        for (auto& v : base_poly) v %= p;
        if (base_poly[t] != 1) throw ConfigInvalid("base_poly must be monic");
        if (!pirreducible(pops, base_poly, p, 1)) throw ConfigInvalid("base_poly is reducible");
        cx->base_poly_ = std::move(base_poly);
    }
    if (p == 2) cx->base_mod_bits_ = pack_bits(cx->base_poly_);

    BaseOps bops{cx.get()};
    auto pack_ext = [&](const std::vector<std::vector<u64>>& blocks) {
        std::vector<u64> flat((size_t)(alpha + 1) * t, 0);
        for (size_t i = 0; i < blocks.size(); ++i)
            std::copy(blocks[i].begin(), blocks[i].end(), flat.begin() + (size_t)i * t);
        return flat;
    };
    std::vector<u64> ext_flat;
    if (ext_poly.empty()) {
        if (!cx->size_fits_u64(Level::base))
            throw FieldTooLarge("supply ext_poly explicitly for this base field");
        ext_flat = canonical_modulus(bops, alpha, p, t);
    } else {
        if (ext_poly.size() != (size_t)alpha + 1)
            throw ConfigInvalid("ext_poly must have degree alpha");
        for (auto& blk : ext_poly) {
            if (blk.size() != t) throw ConfigInvalid("ext_poly coefficient width must be t");
            for (auto& v : blk) v %= p;
        }
        ext_flat = pack_ext(ext_poly);
        std::vector<u64> top(ext_flat.end() - t, ext_flat.end());
        std::vector<u64> one(t, 0);
        one[0] = 1;
        if (top != one) throw ConfigInvalid("ext_poly must be monic");
        if (!pirreducible(bops, ext_flat, p, t)) throw ConfigInvalid("ext_poly is reducible");
    }
    cx->ext_poly_.resize(alpha + 1);
    for (unsigned i = 0; i <= alpha; ++i)
        cx->ext_poly_[i].assign(ext_flat.begin() + (size_t)i * t,
                                ext_flat.begin() + (size_t)(i + 1) * t);
    if (p == 2 && t == 1) {
        std::vector<u64> flat(alpha + 1);
        for (unsigned i = 0; i <= alpha; ++i) flat[i] = cx->ext_poly_[i][0];
        cx->ext_mod_bits_ = pack_bits(flat);
    }
    return cx;
}

std::shared_ptr<const FieldCtx> FieldCtx::with_alpha(unsigned alpha) const {
    if (alpha == alpha_) {
        std::vector<std::vector<u64>> ext = ext_poly_;
        return make(p_, t_, alpha, base_poly_, std::move(ext));
    }
    return make(p_, t_, alpha, base_poly_, {});
}

FieldElem FieldCtx::zero(Level lv) const { return FieldElem{lv, std::vector<u64>(width(lv), 0)}; }

FieldElem FieldCtx::one(Level lv) const {
    FieldElem e = zero(lv);
    e.c[0] = 1;
    return e;
}

FieldElem FieldCtx::from_coeffs(Level lv, std::vector<uint64_t> coeffs) const {
    if (coeffs.size() != width(lv)) throw DimensionMismatch("coefficient count != level width");
    for (auto& v : coeffs) v %= p_;
    return FieldElem{lv, std::move(coeffs)};
}

FieldElem FieldCtx::from_index(Level lv, uint64_t idx) const {
    FieldElem e = zero(lv);
    for (unsigned i = 0; i < width(lv); ++i) {
        e.c[i] = idx % p_;
        idx /= p_;
    }
    if (idx != 0) throw IndexOutOfRange("element index out of range");
    return e;
}

uint64_t FieldCtx::index_of(const FieldElem& x) const {
    if (!size_fits_u64(x.level)) throw FieldTooLarge("index does not fit in 64 bits");
    u64 idx = 0;
    for (unsigned i = width(x.level); i-- > 0;) idx = idx * p_ + x.c[i];
    return idx;
}

FieldElem FieldCtx::embed(const FieldElem& x, Level target) const {
    auto rank = [](Level l) { return l == Level::prime ? 0 : l == Level::base ? 1 : 2; };
    if (rank(target) < rank(x.level)) throw LevelMismatch("embed goes upward only");
    FieldElem e = zero(target);
    std::copy(x.c.begin(), x.c.end(), e.c.begin());
    return e;
}

FieldElem FieldCtx::add(const FieldElem& a, const FieldElem& b) const {
    check_level(a, a.level);
    check_level(b, a.level);
    FieldElem out = zero(a.level);
    for (size_t i = 0; i < a.c.size(); ++i) out.c[i] = (a.c[i] + b.c[i]) % p_;
    return out;
}

FieldElem FieldCtx::sub(const FieldElem& a, const FieldElem& b) const {
    check_level(a, a.level);
    check_level(b, a.level);
    FieldElem out = zero(a.level);
    for (size_t i = 0; i < a.c.size(); ++i) out.c[i] = (a.c[i] + p_ - b.c[i]) % p_;
    return out;
}

FieldElem FieldCtx::neg(const FieldElem& a) const {
    check_level(a, a.level);
    FieldElem out = zero(a.level);
    for (size_t i = 0; i < a.c.size(); ++i) out.c[i] = (p_ - a.c[i]) % p_;
    return out;
}

uint64_t FieldCtx::padd(u64 a, u64 b) const { return (a + b) % p_; }
uint64_t FieldCtx::psub(u64 a, u64 b) const { return (a + p_ - b) % p_; }
uint64_t FieldCtx::pmul(u64 a, u64 b) const { return mulmod_u64(a, b, p_); }
uint64_t FieldCtx::pinv(u64 a) const { return inv_mod_prime(a, p_); }

void FieldCtx::bmul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out,
                    bool allow_packed) const {
    if (t_ == 1) {
        out[0] = pmul(a[0], b[0]);
        return;
    }
    if (p_ == 2 && allow_packed) {
        auto pa = pack_bits(a), pb = pack_bits(b);
        auto r = clmul(pa, t_, pb, t_);
        clreduce(r, 2 * t_ - 1, base_mod_bits_, t_);
        unpack_bits(r, out);
        return;
    }
    PrimeOps K{p_};
    std::vector<u64> va(a.begin(), a.end()), vb(b.begin(), b.end());
    auto r = pconv(K, va, vb);
    std::vector<u64> mod(base_poly_);
    preduce(K, r, mod);
    std::copy(r.begin(), r.end(), out.begin());
}

void FieldCtx::binv(std::span<const u64> a, std::span<u64> out) const {
    if (t_ == 1) {
        out[0] = pinv(a[0]);
        return;
    }
    PrimeOps K{p_};
    std::vector<u64> va(a.begin(), a.end());
    auto r = pinvmod(K, va, base_poly_);
    std::copy(r.begin(), r.end(), out.begin());
}

void FieldCtx::emul(std::span<const u64> a, std::span<const u64> b, std::span<u64> out,
                    bool allow_packed) const {
    if (alpha_ == 1) {
        bmul(a, b, out, allow_packed);
        return;
    }
    if (p_ == 2 && t_ == 1 && allow_packed) {
        auto pa = pack_bits(a), pb = pack_bits(b);
        auto r = clmul(pa, alpha_, pb, alpha_);
        clreduce(r, 2 * alpha_ - 1, ext_mod_bits_, alpha_);
        unpack_bits(r, out);
        return;
    }
    BaseOps K{this, allow_packed};
    std::vector<u64> va(a.begin(), a.end()), vb(b.begin(), b.end());
    auto r = pconv(K, va, vb);
    std::vector<u64> mod((size_t)(alpha_ + 1) * t_);
    for (unsigned i = 0; i <= alpha_; ++i)
        std::copy(ext_poly_[i].begin(), ext_poly_[i].end(), mod.begin() + (size_t)i * t_);
    preduce(K, r, mod);
    std::copy(r.begin(), r.end(), out.begin());
}

void FieldCtx::einv(std::span<const u64> a, std::span<u64> out) const {
    if (alpha_ == 1) {
        binv(a, out);
        return;
    }
    BaseOps K{this};
    std::vector<u64> va(a.begin(), a.end());
    std::vector<u64> mod((size_t)(alpha_ + 1) * t_);
    for (unsigned i = 0; i <= alpha_; ++i)
        std::copy(ext_poly_[i].begin(), ext_poly_[i].end(), mod.begin() + (size_t)i * t_);
    auto r = pinvmod(K, va, mod);
    std::copy(r.begin(), r.end(), out.begin());
}

FieldElem FieldCtx::mul(const FieldElem& a, const FieldElem& b) const {
    check_level(a, a.level);
    check_level(b, a.level);
    FieldElem out = zero(a.level);
    switch (a.level) {
        case Level::prime: out.c[0] = pmul(a.c[0], b.c[0]); break;
        case Level::base: bmul(a.c, b.c, out.c, true); break;
        case Level::ext: emul(a.c, b.c, out.c, true); break;
    }
    return out;
}

FieldElem FieldCtx::mul_generic(const FieldElem& a, const FieldElem& b) const {
    check_level(a, a.level);
    check_level(b, a.level);
    FieldElem out = zero(a.level);
    switch (a.level) {
        case Level::prime: out.c[0] = pmul(a.c[0], b.c[0]); break;
        case Level::base: bmul(a.c, b.c, out.c, false); break;
        case Level::ext: emul(a.c, b.c, out.c, false); break;
    }
    return out;
}

FieldElem FieldCtx::inv(const FieldElem& a) const {
    check_level(a, a.level);
    if (is_zero(a)) throw DivisionByZero("inverse of zero");
    FieldElem out = zero(a.level);
    switch (a.level) {
        case Level::prime: out.c[0] = pinv(a.c[0]); break;
        case Level::base: binv(a.c, out.c); break;
        case Level::ext: einv(a.c, out.c); break;
    }
    return out;
}

FieldElem FieldCtx::pow(const FieldElem& a, uint64_t e) const {
    check_level(a, a.level);
    FieldElem acc = one(a.level);
    FieldElem base = a;
    while (e) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return acc;
}

bool FieldCtx::is_zero(const FieldElem& a) const {
    for (u64 v : a.c)
        if (v) return false;
    return true;
}

FieldElem FieldCtx::trace(const FieldElem& x) const {
    check_level(x, Level::base);
    FieldElem acc = x;
    FieldElem cur = x;
    for (unsigned j = 1; j < t_; ++j) {
        cur = pow(cur, p_);
        acc = add(acc, cur);
    }
    // the trace lands in F_p: only the constant coordinate survives
    FieldElem out = zero(Level::prime);
    out.c[0] = acc.c[0];
    return out;
}

std::vector<FieldElem> FieldCtx::lift(const std::vector<FieldElem>& v) const {
    if (v.size() % alpha_ != 0)
        throw LengthNotDivisible("vector length not divisible by alpha");
    std::vector<FieldElem> out;
    out.reserve(v.size() / alpha_);
    for (size_t k = 0; k < v.size(); k += alpha_) {
        FieldElem e = zero(Level::ext);
        for (unsigned j = 0; j < alpha_; ++j) {
            check_level(v[k + j], Level::base);
            std::copy(v[k + j].c.begin(), v[k + j].c.end(), e.c.begin() + (size_t)j * t_);
        }
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<FieldElem> FieldCtx::flatten(const std::vector<FieldElem>& v) const {
    std::vector<FieldElem> out;
    out.reserve(v.size() * alpha_);
    for (const auto& e : v) {
        check_level(e, Level::ext);
        for (unsigned j = 0; j < alpha_; ++j) {
            FieldElem b = zero(Level::base);
            std::copy(e.c.begin() + (size_t)j * t_, e.c.begin() + (size_t)(j + 1) * t_,
                      b.c.begin());
            out.push_back(std::move(b));
        }
    }
    return out;
}

std::vector<FieldElem> FieldCtx::enumerate(Level lv, uint64_t cap) const {
    if (!size_fits_u64(lv) || size_u64(lv) > cap)
        throw FieldTooLarge("field too large to enumerate");
    u64 n = size_u64(lv);
    std::vector<FieldElem> out;
    out.reserve(n);
    for (u64 i = 0; i < n; ++i) out.push_back(from_index(lv, i));
    return out;
}

FieldElem FieldCtx::sample(Level lv, Rng& rng) const {
    FieldElem e = zero(lv);
    for (auto& v : e.c) v = rng.below(p_);
    return e;
}

FieldElem FieldCtx::sample_nonzero(Level lv, Rng& rng) const {
    for (;;) {
        FieldElem e = sample(lv, rng);
        if (!is_zero(e)) return e;
    }
}

}  // namespace qlnc
