#include "bertini/zeta.hpp"

#include "bertini/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

namespace bertini::zeta {

namespace {

Integer ipow(std::uint64_t q, std::uint64_t e) { return boost::multiprecision::pow(Integer(q), static_cast<unsigned>(e)); }

void require_convergent(unsigned s, unsigned dim) {
    require(s > dim, ErrorKind::Divergent,
            "the product diverges for s = " + std::to_string(s) + " <= dimension " + std::to_string(dim));
}

double relative_change(const Rational& a, const Rational& b) {
    const double x = to_double(a), y = to_double(b);
    return y == 0 ? 0 : std::abs(x - y) / y;
}

}  // namespace

std::string to_string(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::vector<Rational> euler_prefixes(std::span<const std::uint64_t> a, std::uint64_t q, unsigned s) {
    std::vector<Rational> out{Rational(1)};
    Integer num = 1;
    std::uint64_t den_exp = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::uint64_t e = i + 1;
        const Integer qe = ipow(q, s * e);
        if (a[i]) num *= boost::multiprecision::pow(qe - 1, static_cast<unsigned>(a[i]));
        den_exp += s * e * a[i];
        out.emplace_back(num, ipow(q, den_exp));
    }
    return out;
}

ZetaApprox zeta_inv_truncated(const SubschemeSpec& x, unsigned s, unsigned r) {
    require(s >= 1, ErrorKind::InvalidArgument, "s must be at least 1");
    require(r >= 1, ErrorKind::InvalidArgument, "truncation degree must be at least 1");
    require_convergent(s, x.m);
    ZetaApprox z;
    z.s = s;
    z.r = r;
    if (r > 1) z.terms = geometry::closed_counts(geometry::count_sequence(x, r - 1));
    auto prefixes = euler_prefixes(z.terms, x.q(), s);
    z.value = prefixes.back();
    for (std::size_t k = prefixes.size() - 1; k >= 1 && k + 2 >= prefixes.size(); --k)
        z.stabilization = std::max(z.stabilization, relative_change(prefixes[k - 1], prefixes[k]));
    return z;
}

Rational zeta_inv_projective(unsigned n, std::uint64_t q, unsigned s) {
    require_convergent(s, n);
    Rational v = 1;
    for (unsigned i = 0; i <= n; ++i) v *= Rational(1) - Rational(Integer(1), ipow(q, s - i));
    return v;
}

Rational zeta_inv_affine(unsigned n, std::uint64_t q, unsigned s) {
    require_convergent(s, n);
    return Rational(1) - Rational(Integer(1), ipow(q, s - n));
}

Rational zeta_inv_closed_form(const SubschemeSpec& x, unsigned s) {
    switch (x.kind) {
        case geometry::SpaceKind::Projective: return zeta_inv_projective(x.n, x.q(), s);
        case geometry::SpaceKind::Affine: return zeta_inv_affine(x.n, x.q(), s);
        default: break;
    }
    fail(ErrorKind::UnsupportedX, "no closed form for " + x.name);
}

const char* to_string(DensityPrediction::Provenance p) {
    return p == DensityPrediction::Provenance::ClosedForm ? "ClosedForm" : "Truncated";
}

DensityPrediction predict_density(const SubschemeSpec& x, unsigned r) {
    DensityPrediction d;
    if (x.kind != geometry::SpaceKind::General) {
        d.value = zeta_inv_closed_form(x, x.m + 1);
        return d;
    }
    auto z = zeta_inv_truncated(x, x.m + 1, r);
    d.provenance = DensityPrediction::Provenance::Truncated;
    d.value = z.value;
    d.r = r;
    d.stabilization = z.stabilization;
    d.note = "closed points of degree < " + std::to_string(r) +
             "; the tail is only heuristically geometric, no rigorous bound";
    return d;
}

DensityPrediction predict_density_with_jets(const SubschemeSpec& x, const std::vector<unsigned>& removed_degrees,
                                            const Integer& t_size, const Integer& h0_size, unsigned r) {
    require(h0_size > 0 && t_size <= h0_size, ErrorKind::InvalidArgument, "need 0 <= #T <= #H^0 and #H^0 > 0");
    require(t_size > 0, ErrorKind::EmptyT, "T is empty");
    auto d = predict_density(x, r);
    const unsigned s = x.m + 1;
    for (unsigned e : removed_degrees) {
        if (d.provenance == DensityPrediction::Provenance::Truncated && e >= r) continue;
        d.value /= Rational(1) - Rational(Integer(1), ipow(x.q(), static_cast<std::uint64_t>(s) * e));
    }
    Rational factor(t_size, h0_size);
    d.jet_factor = factor;
    d.value *= factor;
    return d;
}

TailReport tail_report(const SubschemeSpec& x, unsigned s, unsigned r_max) {
    require(r_max >= 2, ErrorKind::InvalidArgument, "tail report needs r_max >= 2");
    require_convergent(s, x.m);
    auto a = geometry::closed_counts(geometry::count_sequence(x, r_max - 1));
    auto prefixes = euler_prefixes(a, x.q(), s);
    TailReport rep;
    for (unsigned r = 2; r <= r_max; ++r) {
        ZetaApprox z;
        z.s = s;
        z.r = r;
        z.value = prefixes[r - 1];
        z.terms.assign(a.begin(), a.begin() + (r - 1));
        for (unsigned k = r - 1; k >= 1 && k + 2 >= r; --k)
            z.stabilization = std::max(z.stabilization, relative_change(prefixes[k - 1], prefixes[k]));
        rep.values.push_back(std::move(z));
    }
    for (std::size_t i = 0; i + 1 < rep.values.size(); ++i)
        rep.deltas.push_back(rep.values[i].value - rep.values[i + 1].value);
    for (std::size_t i = 0; i + 1 < rep.deltas.size(); ++i) {
        const double a0 = to_double(rep.deltas[i]), a1 = to_double(rep.deltas[i + 1]);
        rep.ratios.push_back(a0 == 0 ? 0 : a1 / a0);
    }
    return rep;
}

SquarefreeReport squarefree_integer_density(std::uint64_t limit) {
    require(limit >= 1, ErrorKind::InvalidArgument, "limit must be at least 1");
    require(limit <= (std::uint64_t{1} << 32), ErrorKind::BudgetExceeded, "limit above 2^32");
    std::vector<bool> divisible(limit + 1, false);
    for (std::uint64_t k = 2; k * k <= limit; ++k)
        for (std::uint64_t m = k * k; m <= limit; m += k * k) divisible[m] = true;
    SquarefreeReport rep;
    rep.limit = limit;
    for (std::uint64_t m = 1; m <= limit; ++m) rep.squarefree += divisible[m] ? 0 : 1;
    rep.fraction = Rational(Integer(rep.squarefree), Integer(limit));
    rep.target = 6.0 / (boost::math::constants::pi<double>() * boost::math::constants::pi<double>());
    rep.difference = std::abs(to_double(rep.fraction) - rep.target);
    return rep;
}

}  // namespace bertini::zeta
