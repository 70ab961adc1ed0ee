#include "bertini/gf.hpp"

#include "bertini/config.hpp"
#include "bertini/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace bertini::gf {

namespace {

void trim(FpPoly& f) {
    while (f.size() > 1 && f.back() == 0) f.pop_back();
}

unsigned degree_of(const FpPoly& f) { return f.empty() ? 0 : static_cast<unsigned>(f.size() - 1); }

std::uint32_t inv_mod_p(std::uint32_t x, std::uint32_t p) {
    std::uint64_t result = 1, base = x % p;
    std::uint64_t n = p - 2;
    while (n > 0) {
        if (n & 1) result = result * base % p;
        base = base * base % p;
        n >>= 1;
    }
    return static_cast<std::uint32_t>(result);
}

// remainder of f modulo monic g
FpPoly fp_mod(FpPoly f, const FpPoly& g, std::uint32_t p) {
    const unsigned dg = degree_of(g);
    for (std::size_t i = f.size(); i-- > dg;) {
        std::uint32_t c = f[i];
        if (c == 0) continue;
        for (unsigned j = 0; j <= dg; ++j) {
            std::uint32_t sub = static_cast<std::uint32_t>(std::uint64_t{c} * g[j] % p);
            std::size_t idx = i - dg + j;
            f[idx] = (f[idx] + p - sub) % p;
        }
    }
    if (f.size() > dg) f.resize(dg);
    if (f.empty()) f.push_back(0);
    trim(f);
    return f;
}

bool is_zero(const FpPoly& f) { return f.size() == 1 && f[0] == 0; }

FpPoly unpack(std::uint64_t code, std::uint32_t p, unsigned length) {
    FpPoly f(length);
    for (unsigned i = 0; i < length; ++i) {
        f[i] = static_cast<std::uint32_t>(code % p);
        code /= p;
    }
    return f;
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < exp; ++i) r *= base;
    return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool fp_irreducible(const FpPoly& f, std::uint32_t p) {
    const unsigned n = degree_of(f);
    if (n == 0) return false;
    if (n == 1) return true;
    // normalise to monic for the division
    FpPoly g = f;
    trim(g);
    std::uint32_t lead_inv = inv_mod_p(g.back(), p);
    for (auto& c : g) c = static_cast<std::uint32_t>(std::uint64_t{c} * lead_inv % p);
    for (unsigned k = 1; k <= n / 2; ++k) {
        const std::uint64_t count = ipow(p, k);
        for (std::uint64_t code = 0; code < count; ++code) {
            FpPoly div = unpack(code, p, k);
            div.push_back(1);
            // fp_mod reduces g modulo div
            if (is_zero(fp_mod(g, div, p))) return false;
        }
    }
    return true;
}

FpPoly smallest_irreducible(std::uint32_t p, unsigned degree) {
    require(degree >= 1, ErrorKind::DegreeZero, "irreducible polynomial of degree 0 requested");
    const std::uint64_t count = ipow(p, degree);
    for (std::uint64_t code = 0; code < count; ++code) {
        FpPoly f = unpack(code, p, degree);
        f.push_back(1);
        if (fp_irreducible(f, p)) return f;
    }
    fail(ErrorKind::InvariantBreach, "no irreducible polynomial found");
}

std::pair<std::uint32_t, unsigned> prime_power(std::uint64_t q) {
    require(q >= 2, ErrorKind::NotPrime, "field order " + std::to_string(q) + " is not a prime power");
    std::uint64_t p = prime_factors(q).front();
    unsigned a = 0;
    std::uint64_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++a;
    }
    require(rest == 1, ErrorKind::NotPrime, "field order " + std::to_string(q) + " is not a prime power");
    return {static_cast<std::uint32_t>(p), a};
}

std::uint64_t FieldDesc::q() const { return ipow(p, a); }

FieldDesc field_make(std::uint64_t p, unsigned a) {
    require(is_prime(p), ErrorKind::NotPrime, std::to_string(p) + " is not prime");
    require(a >= 1, ErrorKind::DegreeZero, "extension degree must be >= 1");
    require(p < (1u << 16), ErrorKind::Overflow, "characteristic too large");
    FieldDesc d;
    d.p = static_cast<std::uint32_t>(p);
    d.a = a;
    d.modulus = smallest_irreducible(d.p, a);
    return d;
}

FieldDesc field_of_order(std::uint64_t q) {
    auto [p, a] = prime_power(q);
    return field_make(p, a);
}

std::string format_fp_poly(const FpPoly& f, char var) {
    std::string out;
    for (std::size_t i = f.size(); i-- > 0;) {
        if (f[i] == 0) continue;
        if (!out.empty()) out += '+';
        if (i == 0 || f[i] != 1) out += std::to_string(f[i]);
        if (i > 0) {
            if (f[i] != 1) out += '*';
            out += var;
            if (i > 1) out += '^' + std::to_string(i);
        }
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------------------

WorkingField::WorkingField(FieldDesc base, unsigned e) : base_(std::move(base)), e_(e) {
    require(e >= 1, ErrorKind::DegreeZero, "working extension degree must be >= 1");
    p_ = base_.p;
    k_ = base_.a * e;
    q_ = base_.q();
    const unsigned bits = std::min(config::max_field_bits(), 31u);
    long double log2_size = static_cast<long double>(k_) * std::log2(static_cast<long double>(p_));
    require(log2_size <= bits + 1e-9L, ErrorKind::Overflow,
            "field of size " + std::to_string(p_) + "^" + std::to_string(k_) + " exceeds 2^" +
                std::to_string(bits));
    size_ = ipow(p_, k_);
    pow_p_.resize(k_ + 1);
    for (unsigned i = 0; i <= k_; ++i) pow_p_[i] = static_cast<std::uint32_t>(ipow(p_, i));

    modulus_ = (e == 1) ? base_.modulus : smallest_irreducible(p_, k_);
    if (p_ == 2) {
        for (unsigned i = 0; i <= k_; ++i)
            if (modulus_[i]) mod_bits_ |= std::uint64_t{1} << i;
    }
    if (size_ <= (1u << 16)) build_tables();

    // embedding: smallest root of the base modulus, scanning canonical order
    if (base_.a == 1) {
        embed_image_ = zero();
    } else {
        bool found = false;
        for (std::uint64_t v = 0; v < size_ && !found; ++v) {
            Elem x{static_cast<std::uint32_t>(v)};
            Elem acc = zero();
            for (std::size_t i = base_.modulus.size(); i-- > 0;)
                acc = add(mul(acc, x), from_int(base_.modulus[i]));
            if (acc == zero()) {
                embed_image_ = x;
                found = true;
            }
        }
        require(found, ErrorKind::InvariantBreach, "base modulus has no root in working field");
    }
    embed_.resize(q_);
    for (std::uint64_t c = 0; c < q_; ++c) {
        Elem acc = zero();
        Elem power = one();
        std::uint64_t code = c;
        for (unsigned i = 0; i < base_.a; ++i) {
            acc = add(acc, mul(from_int(static_cast<std::int64_t>(code % p_)), power));
            code /= p_;
            power = mul(power, embed_image_);
        }
        embed_[c] = acc;
    }
}

void WorkingField::build_tables() {
    const std::uint64_t order = size_ - 1;
    if (order == 0) return;
    const auto factors = prime_factors(order);
    Elem gen{0};
    for (std::uint64_t v = 1; v < size_; ++v) {
        Elem cand{static_cast<std::uint32_t>(v)};
        bool primitive = true;
        for (auto ell : factors) {
            if (pow_generic(cand, order / ell) == one()) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            gen = cand;
            break;
        }
    }
    exp_.assign(2 * order, 0);
    log_.assign(size_, 0);
    Elem acc = one();
    for (std::uint64_t i = 0; i < order; ++i) {
        exp_[i] = acc.v;
        exp_[i + order] = acc.v;
        log_[acc.v] = static_cast<std::uint32_t>(i);
        acc = mul_generic(acc, gen);
    }
}

Elem WorkingField::add(Elem x, Elem y) const {
    if (p_ == 2) return Elem{x.v ^ y.v};
    std::uint32_t out = 0;
    std::uint32_t a = x.v, b = y.v;
    for (unsigned i = 0; i < k_; ++i) {
        std::uint32_t d = (a % p_ + b % p_) % p_;
        out += d * pow_p_[i];
        a /= p_;
        b /= p_;
    }
    return Elem{out};
}

Elem WorkingField::neg(Elem x) const {
    if (p_ == 2) return x;
    std::uint32_t out = 0;
    std::uint32_t a = x.v;
    for (unsigned i = 0; i < k_; ++i) {
        std::uint32_t d = a % p_;
        out += ((p_ - d) % p_) * pow_p_[i];
        a /= p_;
    }
    return Elem{out};
}

Elem WorkingField::sub(Elem x, Elem y) const { return add(x, neg(y)); }

Elem WorkingField::mul(Elem x, Elem y) const {
    if (x.v == 0 || y.v == 0) return zero();
    if (!log_.empty()) return Elem{exp_[log_[x.v] + log_[y.v]]};
    return mul_generic(x, y);
}

Elem WorkingField::mul_generic(Elem x, Elem y) const {
    if (p_ == 2) {
        std::uint64_t prod = 0;
        std::uint64_t a = x.v;
        for (std::uint32_t b = y.v; b != 0; b >>= 1, a <<= 1)
            if (b & 1) prod ^= a;
        for (int i = 2 * static_cast<int>(k_) - 2; i >= static_cast<int>(k_); --i)
            if (prod >> i & 1) prod ^= mod_bits_ << (i - k_);
        return Elem{static_cast<std::uint32_t>(prod)};
    }
    std::vector<std::uint64_t> prod(2 * k_, 0);
    std::vector<std::uint32_t> a(k_), b(k_);
    for (unsigned i = 0; i < k_; ++i) {
        a[i] = digit(x, i);
        b[i] = digit(y, i);
    }
    for (unsigned i = 0; i < k_; ++i) {
        if (a[i] == 0) continue;
        for (unsigned j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p_;
    }
    for (int i = 2 * static_cast<int>(k_) - 2; i >= static_cast<int>(k_); --i) {
        std::uint64_t c = prod[i];
        if (c == 0) continue;
        for (unsigned j = 0; j <= k_; ++j) {
            std::size_t idx = i - k_ + j;
            prod[idx] = (prod[idx] + (p_ - c) * modulus_[j]) % p_;
        }
    }
    std::uint32_t out = 0;
    for (unsigned i = 0; i < k_; ++i) out += static_cast<std::uint32_t>(prod[i]) * pow_p_[i];
    return Elem{out};
}

Elem WorkingField::pow_generic(Elem x, std::uint64_t n) const {
    Elem result = one();
    Elem base = x;
    while (n > 0) {
        if (n & 1) result = mul_generic(result, base);
        base = mul_generic(base, base);
        n >>= 1;
    }
    return result;
}

Elem WorkingField::pow(Elem x, std::uint64_t n) const {
    if (n == 0) return one();
    if (x.v == 0) return zero();
    if (!log_.empty()) {
        const std::uint64_t order = size_ - 1;
        std::uint64_t l = (static_cast<unsigned __int128>(log_[x.v]) * (n % order)) % order;
        return Elem{exp_[l]};
    }
    Elem result = one();
    Elem base = x;
    while (n > 0) {
        if (n & 1) result = mul(result, base);
        base = mul(base, base);
        n >>= 1;
    }
    return result;
}

Elem WorkingField::inv(Elem x) const {
    require(x.v != 0, ErrorKind::DivisionByZero, "inverse of zero");
    if (!log_.empty()) {
        const std::uint64_t order = size_ - 1;
        return Elem{exp_[(order - log_[x.v]) % order]};
    }
    return pow(x, size_ - 2);
}

Elem WorkingField::from_int(std::int64_t c) const {
    std::int64_t r = c % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return Elem{static_cast<std::uint32_t>(r)};
}

Elem WorkingField::from_digits(const std::vector<std::uint32_t>& digits) const {
    std::uint32_t out = 0;
    for (unsigned i = 0; i < k_ && i < digits.size(); ++i) out += (digits[i] % p_) * pow_p_[i];
    return Elem{out};
}

std::vector<Elem> WorkingField::enumerate() const {
    std::vector<Elem> out(size_);
    for (std::uint64_t v = 0; v < size_; ++v) out[v] = Elem{static_cast<std::uint32_t>(v)};
    return out;
}

std::string WorkingField::format(Elem x) const {
    FpPoly f(k_);
    for (unsigned i = 0; i < k_; ++i) f[i] = digit(x, i);
    trim(f);
    return format_fp_poly(f, 'g');
}

Elem WorkingField::parse(std::string_view text) const {
    std::vector<std::int64_t> coeffs(k_, 0);
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto read_int = [&]() -> std::int64_t {
        std::size_t start = pos;
        std::int64_t v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = (v * 10 + (text[pos] - '0')) % static_cast<std::int64_t>(p_);
            ++pos;
        }
        if (pos == start) throw SyntaxError(pos, "expected integer");
        return v;
    };
    int sign = 1;
    skip_ws();
    if (pos < text.size() && text[pos] == '-') {
        sign = -1;
        ++pos;
    }
    bool first = true;
    while (true) {
        skip_ws();
        if (!first) {
            if (pos >= text.size()) break;
            if (text[pos] == '+') sign = 1;
            else if (text[pos] == '-') sign = -1;
            else throw SyntaxError(pos, "expected '+' or '-'");
            ++pos;
            skip_ws();
        }
        first = false;
        std::int64_t c = 1;
        unsigned power = 0;
        bool have_coeff = false;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            c = read_int();
            have_coeff = true;
            skip_ws();
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                skip_ws();
                if (pos >= text.size() || text[pos] != 'g') throw SyntaxError(pos, "expected 'g'");
            }
        }
        if (pos < text.size() && text[pos] == 'g') {
            ++pos;
            power = 1;
            skip_ws();
            if (pos < text.size() && text[pos] == '^') {
                ++pos;
                skip_ws();
                std::size_t start = pos;
                std::uint64_t v = 0;
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                    v = v * 10 + (text[pos] - '0');
                    if (v > 1u << 20) throw SyntaxError(start, "exponent too large");
                    ++pos;
                }
                if (pos == start) throw SyntaxError(pos, "expected exponent");
                power = static_cast<unsigned>(v);
            }
        } else if (!have_coeff) {
            throw SyntaxError(pos, "expected integer or 'g'");
        }
        if (power >= k_ && c % p_ != 0)
            fail(ErrorKind::CoefficientNotInField,
                 "g^" + std::to_string(power) + " outside a field of degree " + std::to_string(k_));
        if (power < k_) coeffs[power] += sign * c;
    }
    std::vector<std::uint32_t> digits(k_);
    for (unsigned i = 0; i < k_; ++i) {
        std::int64_t r = coeffs[i] % static_cast<std::int64_t>(p_);
        digits[i] = static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }
    return from_digits(digits);
}

FieldPtr field_extend(const FieldDesc& base, unsigned e) {
    require(e >= 1, ErrorKind::DegreeZero, "extension degree must be >= 1");
    static std::mutex mu;
    static std::map<std::tuple<std::uint32_t, unsigned, unsigned, unsigned>, FieldPtr> cache;
    // the guard may change between calls, so check before consulting the cache
    const unsigned bits = std::min(config::max_field_bits(), 31u);
    long double log2_size =
        static_cast<long double>(base.a) * e * std::log2(static_cast<long double>(base.p));
    require(log2_size <= bits + 1e-9L, ErrorKind::Overflow,
            "F_{q^" + std::to_string(e) + "} exceeds the 2^" + std::to_string(bits) + " field-size guard");
    auto key = std::make_tuple(base.p, base.a, e, 0u);
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end() && it->second->base() == base) return it->second;
    auto field = std::make_shared<const WorkingField>(base, e);
    cache[key] = field;
    return field;
}

}  // namespace bertini::gf
