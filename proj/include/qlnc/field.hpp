#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "qlnc/errors.hpp"
#include "qlnc/rng.hpp"

namespace qlnc {

class Rng;

/// The three floors of the field tower F_p < F_q < F_q' with q = p^t and
/// q' = q^alpha.
enum class Level { prime, base, ext };

/// One field element. Stored as the vector of its F_p coordinates in the
/// polynomial basis, lowest power first:
///   prime: 1 word, base: t words, ext: alpha*t words (alpha blocks of t).
/// Always kept reduced mod p, so operator== is exact element equality.
struct FieldElem {
    Level level = Level::prime;
    std::vector<uint64_t> c;

    bool operator==(const FieldElem&) const = default;
};

/// Arithmetic context for a fixed tower (p, t, alpha). Immutable after
/// construction and safe to share across threads.
///
/// base_poly is the degree-t modulus of F_q over F_p (monic, F_p coefficients,
/// lowest power first). ext_poly is the degree-alpha modulus of F_q' over F_q
/// (monic, F_q coefficients). When not supplied, each modulus is the first
/// monic irreducible in the index order of its coefficient vector, found by a
/// deterministic search, so a tower is reproducible from (p, t, alpha) alone.
class FieldCtx {
  public:
    static std::shared_ptr<const FieldCtx> make(uint64_t p, unsigned t, unsigned alpha);
    static std::shared_ptr<const FieldCtx> make(uint64_t p, unsigned t, unsigned alpha,
                                                std::vector<uint64_t> base_poly,
                                                std::vector<std::vector<uint64_t>> ext_poly);

    /// Same tower, different top-extension degree. Keeps base_poly.
    std::shared_ptr<const FieldCtx> with_alpha(unsigned alpha) const;

    uint64_t p() const { return p_; }
    unsigned t() const { return t_; }
    unsigned alpha() const { return alpha_; }
    const std::vector<uint64_t>& base_poly() const { return base_poly_; }
    const std::vector<std::vector<uint64_t>>& ext_poly() const { return ext_poly_; }

    /// Number of F_p words an element of this level occupies.
    unsigned width(Level lv) const;

    /// Field size as a double (may overflow to inf for large towers).
    double size_approx(Level lv) const;
    /// Field size if it fits in uint64_t, otherwise throws FieldTooLarge.
    uint64_t size_u64(Level lv) const;
    bool size_fits_u64(Level lv) const;

    bool same_tower(const FieldCtx& o) const;

    // --- element factories ---
    FieldElem zero(Level lv) const;
    FieldElem one(Level lv) const;
    /// Element from raw F_p coordinates (reduced mod p on the way in).
    FieldElem from_coeffs(Level lv, std::vector<uint64_t> coeffs) const;
    /// Element number idx in coefficient-lexicographic order (coefficient of
    /// the lowest power is the least significant base-p digit).
    FieldElem from_index(Level lv, uint64_t idx) const;
    uint64_t index_of(const FieldElem& x) const;
    /// Embed into a higher level as a constant polynomial.
    FieldElem embed(const FieldElem& x, Level target) const;

    // --- arithmetic (both operands must live at the same level) ---
    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const;
    FieldElem neg(const FieldElem& a) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    /// Multiplicative inverse; throws DivisionByZero on zero.
    FieldElem inv(const FieldElem& a) const;
    FieldElem pow(const FieldElem& a, uint64_t e) const;
    bool is_zero(const FieldElem& a) const;

    /// Trace of F_q down to F_p: x + x^p + ... + x^(p^(t-1)). Base level in,
    /// prime level out. For t = 1 this is the identity.
    FieldElem trace(const FieldElem& x) const;

    /// Regroup a base-level vector, alpha entries at a time, into ext-level
    /// elements (entry j becomes the coefficient of the j-th power of the
    /// ext_poly root). Length must be divisible by alpha.
    std::vector<FieldElem> lift(const std::vector<FieldElem>& v) const;
    /// Inverse of lift: ext-level vector to base-level vector, alpha entries
    /// per input element, lowest power first.
    std::vector<FieldElem> flatten(const std::vector<FieldElem>& v) const;

    /// All elements of the level in index order. Throws FieldTooLarge if the
    /// field has more than cap elements.
    std::vector<FieldElem> enumerate(Level lv, uint64_t cap = 1u << 16) const;

    FieldElem sample(Level lv, Rng& rng) const;
    FieldElem sample_nonzero(Level lv, Rng& rng) const;

    // test hook: generic multiply path, bypassing the packed GF(2) kernels
    FieldElem mul_generic(const FieldElem& a, const FieldElem& b) const;

  private:
    FieldCtx() = default;

    uint64_t p_ = 2;
    unsigned t_ = 1;
    unsigned alpha_ = 1;
    std::vector<uint64_t> base_poly_;              // t+1 F_p words
    std::vector<std::vector<uint64_t>> ext_poly_;  // alpha+1 blocks of t words

    void check_level(const FieldElem& x, Level lv) const;

    // width-1 kernels (F_p)
    uint64_t padd(uint64_t a, uint64_t b) const;
    uint64_t psub(uint64_t a, uint64_t b) const;
    uint64_t pmul(uint64_t a, uint64_t b) const;
    uint64_t pinv(uint64_t a) const;

    // width-t kernels (F_q), operating on raw word spans
    void bmul(std::span<const uint64_t> a, std::span<const uint64_t> b,
              std::span<uint64_t> out, bool allow_packed) const;
    void binv(std::span<const uint64_t> a, std::span<uint64_t> out) const;

    // width-alpha*t kernels (F_q')
    void emul(std::span<const uint64_t> a, std::span<const uint64_t> b,
              std::span<uint64_t> out, bool allow_packed) const;
    void einv(std::span<const uint64_t> a, std::span<uint64_t> out) const;

    // packed GF(2) moduli, precomputed when applicable
    std::vector<uint64_t> base_mod_bits_;  // p == 2
    std::vector<uint64_t> ext_mod_bits_;   // p == 2 && t == 1

    friend struct FieldKernelAccess;
};

using FieldCtxPtr = std::shared_ptr<const FieldCtx>;

}  // namespace qlnc
