#pragma once

// Deliberately naive reference computations for cross-checking the engine.

#include "bertini/mpoly.hpp"

#include <vector>

namespace oracle {

using bertini::gf::Elem;
using bertini::gf::FieldDesc;
using bertini::gf::WorkingField;
using bertini::mpoly::HomogPoly;

/// Every point of P^n over w: all (n+1)-tuples whose first nonzero entry is 1.
inline std::vector<std::vector<Elem>> projective_points(unsigned n, const WorkingField& w) {
    std::vector<std::vector<Elem>> out;
    std::vector<Elem> v(n + 1);
    const std::uint64_t Q = w.size();
    std::uint64_t total = 1;
    for (unsigned i = 0; i <= n; ++i) total *= Q;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t c = code;
        for (unsigned i = 0; i <= n; ++i) {
            v[i] = Elem{static_cast<std::uint32_t>(c % Q)};
            c /= Q;
        }
        unsigned j = 0;
        while (j <= n && v[j].v == 0) ++j;
        if (j <= n && v[j].v == 1) out.push_back(v);
    }
    return out;
}

/// f and all its partials vanish somewhere on P^n(F_{q^e}) for some e in 1..B.
inline bool hypersurface_singular(const HomogPoly& f, const FieldDesc& base, unsigned B) {
    if (f.is_zero()) return true;
    std::vector<HomogPoly> partials;
    for (unsigned i = 0; i <= f.n(); ++i) partials.push_back(bertini::mpoly::poly_derive(f, i));
    for (unsigned e = 1; e <= B; ++e) {
        auto w = bertini::gf::field_extend(base, e);
        for (const auto& p : projective_points(f.n(), *w)) {
            if (bertini::mpoly::poly_eval(f, p, *w).v != 0) continue;
            bool all = true;
            for (const auto& g : partials) all = all && bertini::mpoly::poly_eval(g, p, *w).v == 0;
            if (all) return true;
        }
    }
    return false;
}

}  // namespace oracle
