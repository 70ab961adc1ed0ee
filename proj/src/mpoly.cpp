#include "bertini/mpoly.hpp"

#include "bertini/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <utility>

namespace bertini::mpoly {

namespace {

void exps_rec(unsigned var, unsigned nvars, unsigned remaining, std::vector<std::uint16_t>& cur,
              std::vector<std::vector<std::uint16_t>>& out) {
    if (var + 1 == nvars) {
        cur[var] = static_cast<std::uint16_t>(remaining);
        out.push_back(cur);
        return;
    }
    for (unsigned e = 0; e <= remaining; ++e) {
        cur[var] = static_cast<std::uint16_t>(e);
        exps_rec(var + 1, nvars, remaining - e, cur, out);
    }
}

// f's coefficients usable in w: either the same field or f over the base of w
bool embeds_into(const WorkingField& coeff_field, const WorkingField& w) {
    if (coeff_field.same_field(w)) return true;
    return coeff_field.degree() == 1 && coeff_field.base() == w.base();
}

Elem coeff_in(const WorkingField& coeff_field, Elem c, const WorkingField& w) {
    return coeff_field.same_field(w) ? c : w.embed(c);
}

void check_embeds(const WorkingField& coeff_field, const WorkingField& w) {
    require(embeds_into(coeff_field, w), ErrorKind::FieldMismatch,
            "polynomial coefficients do not lie in the evaluation field");
}

std::string format_coeff(const WorkingField& field, Elem c) {
    if (c.v < field.characteristic()) return std::to_string(c.v);
    return "[" + field.format(c) + "]";
}

std::string format_terms(const WorkingField& field, const MonomialTable& table, std::span<const Elem> coeffs,
                         const std::vector<unsigned>& names, unsigned skip_slot) {
    // affine polynomials print lowest total degree first
    std::vector<std::size_t> order(table.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    if (skip_slot <= table.n())
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return table.exponent(a, skip_slot) > table.exponent(b, skip_slot);
        });
    std::string out;
    for (std::size_t k : order) {
        Elem c = coeffs[k];
        if (c.v == 0) continue;
        std::string mono;
        for (unsigned i = 0; i <= table.n(); ++i) {
            if (i == skip_slot) continue;
            unsigned e = table.exponent(k, i);
            if (e == 0) continue;
            if (!mono.empty()) mono += '*';
            mono += 'x' + std::to_string(names[i]);
            if (e > 1) mono += '^' + std::to_string(e);
        }
        std::string term;
        if (mono.empty()) term = format_coeff(field, c);
        else if (c == WorkingField::one()) term = mono;
        else term = format_coeff(field, c) + '*' + mono;
        if (!out.empty()) out += " + ";
        out += term;
    }
    return out.empty() ? "0" : out;
}

}  // namespace

std::uint64_t binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<std::uint64_t>(r);
}

MonomialTable::MonomialTable(unsigned n, unsigned d) : n_(n), d_(d) {
    std::vector<std::vector<std::uint16_t>> all;
    std::vector<std::uint16_t> cur(n + 1, 0);
    exps_rec(0, n + 1, d, cur, all);
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
    });
    count_ = all.size();
    exps_.reserve(count_ * (n + 1));
    for (std::size_t k = 0; k < count_; ++k) {
        exps_.insert(exps_.end(), all[k].begin(), all[k].end());
        index_.emplace(all[k], k);
    }
}

std::size_t MonomialTable::index_of(std::span<const std::uint16_t> exps) const {
    auto it = index_.find(std::vector<std::uint16_t>(exps.begin(), exps.end()));
    return it == index_.end() ? npos : it->second;
}

std::shared_ptr<const MonomialTable> monomials(unsigned n, unsigned d) {
    static std::mutex mu;
    static std::map<std::pair<unsigned, unsigned>, std::shared_ptr<const MonomialTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, d}];
    if (!slot) slot = std::make_shared<const MonomialTable>(n, d);
    return slot;
}

// ---------------------------------------------------------------------------

HomogPoly::HomogPoly(FieldPtr field, unsigned n, unsigned d)
    : field_(std::move(field)), n_(n), d_(d), table_(monomials(n, d)), coeffs_(table_->size()) {}

HomogPoly::HomogPoly(FieldPtr field, unsigned n, unsigned d, std::vector<Elem> coeffs)
    : field_(std::move(field)), n_(n), d_(d), table_(monomials(n, d)), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == table_->size(), ErrorKind::InvalidArgument,
            "coefficient vector length does not match binomial(n+d, n)");
    for (Elem c : coeffs_)
        require(field_->contains(c), ErrorKind::CoefficientNotInField, "coefficient outside field");
}

Elem HomogPoly::coeff_of(std::span<const std::uint16_t> exps) const {
    std::size_t k = table_->index_of(exps);
    return k == MonomialTable::npos ? Elem{0} : coeffs_[k];
}

void HomogPoly::add_term(std::span<const std::uint16_t> exps, Elem c) {
    std::size_t k = table_->index_of(exps);
    require(k != MonomialTable::npos, ErrorKind::NotHomogeneous, "monomial of the wrong degree");
    coeffs_[k] = field_->add(coeffs_[k], c);
}

bool HomogPoly::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](Elem c) { return c.v == 0; });
}

std::size_t HomogPoly::term_count() const {
    return static_cast<std::size_t>(std::count_if(coeffs_.begin(), coeffs_.end(), [](Elem c) { return c.v != 0; }));
}

std::string HomogPoly::to_string() const {
    std::vector<unsigned> names(n_ + 1);
    for (unsigned i = 0; i <= n_; ++i) names[i] = i;
    return format_terms(*field_, *table_, coeffs_, names, n_ + 1);
}

// ---------------------------------------------------------------------------

std::uint64_t s_d_size(std::uint64_t q, unsigned n, unsigned d) {
    const std::uint64_t dim = binomial(n + d, n);
    unsigned __int128 size = 1;
    for (std::uint64_t i = 0; i < dim; ++i) {
        size *= q;
        require(size <= (static_cast<unsigned __int128>(1) << 63), ErrorKind::Overflow,
                "|S_d| exceeds 2^63");
    }
    return static_cast<std::uint64_t>(size);
}

FormSpace::FormSpace(FieldPtr field, unsigned n, unsigned d, std::uint64_t budget)
    : field_(std::move(field)), n_(n), d_(d) {
    require(field_->degree() == 1, ErrorKind::FieldMismatch, "S_d is enumerated over the base field");
    dim_ = binomial(n + d, n);
    q_ = field_->size();
    // |S_d| may not even fit in 64 bits; compare in logs first
    long double log_size = static_cast<long double>(dim_) * std::log2(static_cast<long double>(q_));
    require(log_size < 63.0L, ErrorKind::BudgetExceeded, "|S_d| exceeds the exhaustive budget");
    size_ = s_d_size(q_, n, d);
    require(size_ <= budget, ErrorKind::BudgetExceeded,
            "|S_d| = " + std::to_string(size_) + " exceeds the exhaustive budget " + std::to_string(budget));
}

void FormSpace::decode(std::uint64_t index, std::span<Elem> coeffs) const {
    if (q_ == 2) {
        for (std::size_t k = 0; k < dim_; ++k) coeffs[k] = Elem{static_cast<std::uint32_t>(index >> k & 1)};
        return;
    }
    for (std::size_t k = 0; k < dim_; ++k) {
        coeffs[k] = Elem{static_cast<std::uint32_t>(index % q_)};
        index /= q_;
    }
}

HomogPoly FormSpace::form(std::uint64_t index) const {
    std::vector<Elem> c(dim_);
    decode(index, c);
    return HomogPoly(field_, n_, d_, std::move(c));
}

FormSpace::Slice FormSpace::shard(std::uint64_t k, std::uint64_t shards) const {
    require(shards >= 1 && k < shards, ErrorKind::InvalidArgument, "shard index out of range");
    const std::uint64_t base = size_ / shards, extra = size_ % shards;
    const std::uint64_t begin = k * base + std::min(k, extra);
    return {begin, begin + base + (k < extra ? 1 : 0)};
}

void sample_coeffs(std::uint64_t q, std::span<Elem> coeffs, CounterRng& rng) {
    if (q == 2) {
        std::uint64_t bits = 0;
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            if (k % 64 == 0) bits = rng.next();
            coeffs[k] = Elem{static_cast<std::uint32_t>(bits & 1)};
            bits >>= 1;
        }
        return;
    }
    for (auto& c : coeffs) c = Elem{static_cast<std::uint32_t>(rng.below(q))};
}

HomogPoly poly_sample(const FieldPtr& field, unsigned n, unsigned d, CounterRng& rng) {
    HomogPoly f(field, n, d);
    std::vector<Elem> c(f.size());
    sample_coeffs(field->size(), c, rng);
    return HomogPoly(field, n, d, std::move(c));
}

// ---------------------------------------------------------------------------

HomogPoly poly_derive(const HomogPoly& f, unsigned i) {
    require(i <= f.n(), ErrorKind::BadVariableIndex, "derivative variable out of range");
    if (f.d() == 0) return HomogPoly(f.field_ptr(), f.n(), 0);
    HomogPoly out(f.field_ptr(), f.n(), f.d() - 1);
    const auto& w = f.field();
    std::vector<std::uint16_t> exps(f.n() + 1);
    for (std::size_t k = 0; k < f.size(); ++k) {
        Elem c = f.coeff(k);
        auto e = f.table().exponents(k);
        if (c.v == 0 || e[i] == 0) continue;
        std::copy(e.begin(), e.end(), exps.begin());
        Elem scaled = w.mul(c, w.from_int(e[i]));
        --exps[i];
        out.add_term(exps, scaled);
    }
    return out;
}

HomogPoly poly_embed(const HomogPoly& f, const FieldPtr& target) {
    if (f.field().same_field(*target)) return f;
    check_embeds(f.field(), *target);
    std::vector<Elem> c(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) c[k] = target->embed(f.coeff(k));
    return HomogPoly(target, f.n(), f.d(), std::move(c));
}

HomogPoly poly_mul(const HomogPoly& f, const HomogPoly& g) {
    require(f.n() == g.n() && f.field().same_field(g.field()), ErrorKind::FieldMismatch,
            "multiplying forms over different rings");
    HomogPoly out(f.field_ptr(), f.n(), f.d() + g.d());
    const auto& w = f.field();
    std::vector<std::uint16_t> exps(f.n() + 1);
    for (std::size_t a = 0; a < f.size(); ++a) {
        if (f.coeff(a).v == 0) continue;
        auto ea = f.table().exponents(a);
        for (std::size_t b = 0; b < g.size(); ++b) {
            if (g.coeff(b).v == 0) continue;
            auto eb = g.table().exponents(b);
            for (unsigned i = 0; i <= f.n(); ++i) exps[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
            out.add_term(exps, w.mul(f.coeff(a), g.coeff(b)));
        }
    }
    return out;
}

HomogPoly poly_scale(const HomogPoly& f, Elem c) {
    std::vector<Elem> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = f.field().mul(f.coeff(k), c);
    return HomogPoly(f.field_ptr(), f.n(), f.d(), std::move(out));
}

HomogPoly poly_add(const HomogPoly& f, const HomogPoly& g) {
    require(f.n() == g.n() && f.d() == g.d() && f.field().same_field(g.field()), ErrorKind::FieldMismatch,
            "adding forms from different spaces");
    std::vector<Elem> out(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) out[k] = f.field().add(f.coeff(k), g.coeff(k));
    return HomogPoly(f.field_ptr(), f.n(), f.d(), std::move(out));
}

// ---------------------------------------------------------------------------

AffinePoly::AffinePoly(FieldPtr field, std::vector<unsigned> vars, unsigned d, std::vector<Elem> coeffs)
    : field_(std::move(field)),
      vars_(std::move(vars)),
      d_(d),
      table_(monomials(static_cast<unsigned>(vars_.size()), d)),
      coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == table_->size(), ErrorKind::InvalidArgument, "affine coefficient length mismatch");
}

unsigned AffinePoly::degree() const {
    unsigned best = 0;
    const unsigned slack = nvars();
    for (std::size_t k = 0; k < coeffs_.size(); ++k)
        if (coeffs_[k].v != 0) best = std::max(best, d_ - table_->exponent(k, slack));
    return best;
}

bool AffinePoly::is_constant() const { return degree() == 0; }

Elem AffinePoly::eval(std::span<const Elem> values, const WorkingField& w) const {
    require(values.size() == vars_.size(), ErrorKind::InvalidArgument, "wrong number of affine coordinates");
    check_embeds(*field_, w);
    Elem acc = WorkingField::zero();
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k].v == 0) continue;
        Elem term = coeff_in(*field_, coeffs_[k], w);
        for (unsigned i = 0; i < nvars(); ++i) term = w.mul(term, w.pow(values[i], table_->exponent(k, i)));
        acc = w.add(acc, term);
    }
    return acc;
}

HomogPoly AffinePoly::homogenize(unsigned chart, unsigned d) const {
    require(d >= degree(), ErrorKind::InvalidArgument, "target degree below affine degree");
    const unsigned n = nvars();
    require(chart <= n, ErrorKind::BadVariableIndex, "chart index out of range");
    HomogPoly out(field_, n, d);
    std::vector<std::uint16_t> exps(n + 1);
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k].v == 0) continue;
        unsigned deg = d_ - table_->exponent(k, n);
        unsigned src = 0;
        for (unsigned i = 0; i <= n; ++i) {
            if (i == chart) exps[i] = static_cast<std::uint16_t>(d - deg);
            else exps[i] = table_->exponent(k, src++);
        }
        out.add_term(exps, coeffs_[k]);
    }
    return out;
}

std::string AffinePoly::to_string() const {
    std::vector<unsigned> names(vars_);
    names.push_back(0);
    return format_terms(*field_, *table_, coeffs_, names, nvars());
}

AffinePoly poly_dehomogenize(const HomogPoly& f, unsigned chart) {
    require(chart <= f.n(), ErrorKind::BadVariableIndex, "chart index out of range");
    std::vector<unsigned> vars;
    for (unsigned i = 0; i <= f.n(); ++i)
        if (i != chart) vars.push_back(i);
    auto table = monomials(f.n(), f.d());
    std::vector<Elem> coeffs(table->size());
    std::vector<std::uint16_t> exps(f.n() + 1);
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.coeff(k).v == 0) continue;
        auto e = f.table().exponents(k);
        unsigned dst = 0;
        for (unsigned i = 0; i <= f.n(); ++i)
            if (i != chart) exps[dst++] = e[i];
        exps[f.n()] = e[chart];
        coeffs[table->index_of(exps)] = f.coeff(k);
    }
    return AffinePoly(f.field_ptr(), std::move(vars), f.d(), std::move(coeffs));
}

// ---------------------------------------------------------------------------

Elem poly_eval(const HomogPoly& f, std::span<const Elem> point, const WorkingField& w) {
    require(point.size() == f.n() + 1, ErrorKind::InvalidArgument, "point has the wrong number of coordinates");
    check_embeds(f.field(), w);
    PowerTable pw(f.n(), f.d());
    pw.fill(point, w);
    Elem acc = WorkingField::zero();
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.coeff(k).v == 0) continue;
        Elem term = coeff_in(f.field(), f.coeff(k), w);
        auto e = f.table().exponents(k);
        for (unsigned i = 0; i <= f.n(); ++i)
            if (e[i] != 0) term = w.mul(term, pw.get(i, e[i]));
        acc = w.add(acc, term);
    }
    return acc;
}

std::size_t Jet2::quad_index(unsigned n, unsigned a, unsigned b) {
    if (a > b) std::swap(a, b);
    // rows 0..a-1 hold n, n-1, ... entries
    return static_cast<std::size_t>(a) * n - static_cast<std::size_t>(a) * (a - 1) / 2 + (b - a);
}

Jet2 poly_jet2(const HomogPoly& f, std::span<const Elem> point, unsigned lead, const WorkingField& w) {
    const unsigned n = f.n();
    require(point.size() == n + 1, ErrorKind::InvalidArgument, "point has the wrong number of coordinates");
    require(lead <= n && point[lead] == WorkingField::one(), ErrorKind::InvalidArgument,
            "point not normalised at its lead coordinate");
    check_embeds(f.field(), w);
    Jet2 jet{WorkingField::zero(), std::vector<Elem>(n), std::vector<Elem>(n * (n + 1) / 2)};
    PowerTable pw(n, f.d());
    pw.fill(point, w);

    std::vector<Elem> grad(n), quad(jet.quad.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.coeff(k).v == 0) continue;
        auto e = f.table().exponents(k);
        Elem value = coeff_in(f.field(), f.coeff(k), w);
        std::fill(grad.begin(), grad.end(), WorkingField::zero());
        std::fill(quad.begin(), quad.end(), WorkingField::zero());
        unsigned local = 0;
        for (unsigned i = 0; i <= n; ++i) {
            if (i == lead) continue;
            const unsigned a = local++;
            const unsigned ei = e[i];
            if (ei == 0) continue;
            // (P_i + u_a)^ei = t0 + t1 u_a + t2 u_a^2 + ...
            Elem t0 = pw.get(i, ei);
            Elem t1 = w.mul(w.from_int(ei), pw.get(i, ei - 1));
            Elem t2 = ei >= 2 ? w.mul(w.from_int(static_cast<std::int64_t>(ei) * (ei - 1) / 2), pw.get(i, ei - 2))
                              : WorkingField::zero();
            for (auto& qv : quad) qv = w.mul(qv, t0);
            for (unsigned b = 0; b < n; ++b) {
                std::size_t idx = Jet2::quad_index(n, a, b);
                quad[idx] = w.add(quad[idx], w.mul(grad[b], t1));
            }
            std::size_t aa = Jet2::quad_index(n, a, a);
            quad[aa] = w.add(quad[aa], w.mul(value, t2));
            for (unsigned b = 0; b < n; ++b) grad[b] = w.mul(grad[b], t0);
            grad[a] = w.add(grad[a], w.mul(value, t1));
            value = w.mul(value, t0);
        }
        jet.value = w.add(jet.value, value);
        for (unsigned b = 0; b < n; ++b) jet.gradient[b] = w.add(jet.gradient[b], grad[b]);
        for (std::size_t t = 0; t < quad.size(); ++t) jet.quad[t] = w.add(jet.quad[t], quad[t]);
    }
    return jet;
}

void PowerTable::fill(std::span<const Elem> point, const WorkingField& w) {
    const unsigned vars = static_cast<unsigned>(pw_.size() / stride_);
    for (unsigned i = 0; i < vars; ++i) {
        Elem* row = pw_.data() + i * stride_;
        row[0] = WorkingField::one();
        for (unsigned e = 1; e < stride_; ++e) row[e] = w.mul(row[e - 1], point[i]);
    }
}

CompiledPoly::CompiledPoly(const HomogPoly& f, const WorkingField& w, unsigned stride) {
    check_embeds(f.field(), w);
    require(stride > f.d(), ErrorKind::InvalidArgument, "power table too short for this form");
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (f.coeff(k).v == 0) continue;
        auto e = f.table().exponents(k);
        Term t{coeff_in(f.field(), f.coeff(k), w), static_cast<std::uint32_t>(offsets_.size()), 0};
        for (unsigned i = 0; i <= f.n(); ++i) {
            if (e[i] == 0) continue;
            offsets_.push_back(i * stride + e[i]);
            ++t.count;
        }
        terms_.push_back(t);
    }
}

Elem CompiledPoly::eval(const PowerTable& pw, const WorkingField& w) const {
    const Elem* powers = pw.data();
    Elem acc = WorkingField::zero();
    for (const Term& t : terms_) {
        Elem term = t.coeff;
        for (std::uint32_t j = 0; j < t.count; ++j) term = w.mul(term, powers[offsets_[t.first + j]]);
        acc = w.add(acc, term);
    }
    return acc;
}

}  // namespace bertini::mpoly
