#pragma once

// Exact arithmetic in F_p, F_q = F_{p^a} and working extensions F_{q^e}.
//
// Elements of a field of size p^k are stored as their coefficient vector over
// F_p packed into one integer: digit i (base p) is the coefficient of g^i,
// where g is the class of the variable modulo the field's modulus. Integer
// order on the packed value is the canonical enumeration order, so 0 and 1
// are always the first two elements.

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bertini::gf {

struct Elem {
    std::uint32_t v = 0;

    friend constexpr bool operator==(Elem, Elem) = default;
    friend constexpr auto operator<=>(Elem, Elem) = default;
};

/// Dense polynomial over F_p, lowest degree first, no trailing zeros except for the zero polynomial.
using FpPoly = std::vector<std::uint32_t>;

bool is_prime(std::uint64_t n);

/// Trial division by every monic polynomial of degree <= deg(f)/2.
bool fp_irreducible(const FpPoly& f, std::uint32_t p);

/// Lexicographically smallest monic irreducible of the given degree over F_p.
/// Candidates are ordered by their packed coefficient value (constant term least significant).
FpPoly smallest_irreducible(std::uint32_t p, unsigned degree);

/// (p, a) with q = p^a; throws NotPrime when q is not a prime power.
std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q);

struct FieldDesc {
    std::uint32_t p = 2;
    unsigned a = 1;
    FpPoly modulus;  // monic, degree a

    std::uint64_t q() const;

    friend bool operator==(const FieldDesc&, const FieldDesc&) = default;
};

FieldDesc field_make(std::uint64_t p, unsigned a);

/// field_make for the field with q elements.
FieldDesc field_of_order(std::uint64_t q);

std::string format_fp_poly(const FpPoly& f, char var = 'x');

/// F_{q^e} together with the embedding of its base field F_q.
///
/// Immutable after construction; safe to share read-only between threads.
class WorkingField {
public:
    WorkingField(FieldDesc base, unsigned e);

    const FieldDesc& base() const noexcept { return base_; }
    unsigned degree() const noexcept { return e_; }      // e = [F_{q^e} : F_q]
    unsigned prime_degree() const noexcept { return k_; } // a*e = [F_{q^e} : F_p]
    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint64_t size() const noexcept { return size_; }
    std::uint64_t base_order() const noexcept { return q_; }
    const FpPoly& modulus() const noexcept { return modulus_; }
    Elem embed_image() const noexcept { return embed_image_; }
    bool tabulated() const noexcept { return !log_.empty(); }

    static constexpr Elem zero() { return Elem{0}; }
    static constexpr Elem one() { return Elem{1}; }

    bool contains(Elem x) const noexcept { return x.v < size_; }

    Elem add(Elem x, Elem y) const;
    Elem sub(Elem x, Elem y) const;
    Elem neg(Elem x) const;
    Elem mul(Elem x, Elem y) const;
    Elem inv(Elem x) const;  // throws DivisionByZero
    Elem div(Elem x, Elem y) const { return mul(x, inv(y)); }
    Elem pow(Elem x, std::uint64_t n) const;
    Elem frobenius(Elem x) const { return pow(x, q_); }  // x -> x^q

    /// Image of an integer in the prime subfield.
    Elem from_int(std::int64_t c) const;

    /// Image of an element of the base field F_q.
    Elem embed(Elem base_elem) const { return embed_[base_elem.v]; }

    /// Coefficient of g^i over F_p.
    std::uint32_t digit(Elem x, unsigned i) const { return (x.v / pow_p_[i]) % p_; }
    Elem from_digits(const std::vector<std::uint32_t>& digits) const;

    /// Every element in canonical order.
    std::vector<Elem> enumerate() const;

    /// Polynomial in the generator symbol `g`, e.g. "g^2+1".
    std::string format(Elem x) const;
    /// Inverse of format(); throws SyntaxError / CoefficientNotInField.
    Elem parse(std::string_view text) const;

    bool same_field(const WorkingField& other) const {
        return p_ == other.p_ && k_ == other.k_ && base_.a == other.base_.a;
    }

private:
    Elem mul_generic(Elem x, Elem y) const;
    Elem pow_generic(Elem x, std::uint64_t n) const;
    void build_tables();

    FieldDesc base_;
    unsigned e_;
    std::uint32_t p_;
    unsigned k_;
    std::uint64_t size_;
    std::uint64_t q_;
    FpPoly modulus_;
    std::vector<std::uint32_t> pow_p_;
    std::uint64_t mod_bits_ = 0;  // p == 2: modulus packed as bits
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
    Elem embed_image_;
    std::vector<Elem> embed_;
};

using FieldPtr = std::shared_ptr<const WorkingField>;

/// F_{q^e} over base; cached so repeated calls share tables. Throws Overflow past the size guard.
FieldPtr field_extend(const FieldDesc& base, unsigned e);

/// The base field F_q itself as a working field (e = 1).
inline FieldPtr base_field(const FieldDesc& base) { return field_extend(base, 1); }

}  // namespace bertini::gf
