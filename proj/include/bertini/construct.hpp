#pragma once

// Searches for hypersurface sections with prescribed points, tangents and
// avoided points, and the anti-Bertini checks and constructions.

#include "bertini/sieve.hpp"
#include "bertini/smoothness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bertini::construct {

using geometry::ClosedPoint;
using geometry::SubschemeSpec;
using gf::Elem;
using mpoly::HomogPoly;

/// H_f must pass through the rational point and have the hyperplane {h = 0} as tangent there.
struct TangentCondition {
    ClosedPoint point;
    HomogPoly hyperplane;  // degree 1, h(P) = 0
};

struct SearchSpec {
    SubschemeSpec x;
    std::vector<ClosedPoint> pass_through;
    std::vector<TangentCondition> tangent;   // points must also be in pass_through
    std::optional<unsigned> avoid_degree_below;
    unsigned d_min = 1, d_max = 1;
    std::uint64_t budget = 1u << 16;         // candidates per degree
    std::uint64_t seed = 0;
    std::optional<unsigned> smooth_bound;    // nullopt: the checker's default
};

struct DegreeLog {
    unsigned d = 0;
    std::string mode;          // canonical, sampled or skipped
    std::uint64_t tried = 0;
    std::string space;         // candidate count, exact
    unsigned systems = 0;      // affine systems (one per choice of tangent scalars)
    std::string note;
};

struct SearchResult {
    enum class Kind { Found, NotFoundWithinBudget };
    Kind kind = Kind::NotFoundWithinBudget;
    std::optional<HomogPoly> f;
    unsigned d = 0;
    smooth::Verdict verdict;
    smooth::Integrality integrality;
    std::vector<std::string> checked;   // re-verification transcript
    std::vector<DegreeLog> degrees;

    bool found() const { return kind == Kind::Found; }
};

const char* to_string(SearchResult::Kind k);

/// First f (by degree, then canonical or seeded order) with H_f ∩ X smooth and
/// all conditions met. InconsistentConditions for contradictory prescriptions.
SearchResult find_section(const SearchSpec& spec);

/// H_f ∩ X smooth with no closed point of degree < ell.
SearchResult space_avoiding(const SubschemeSpec& x, unsigned ell, unsigned d_min, unsigned d_max,
                            std::uint64_t budget, std::uint64_t seed);

/// sum_i (x_i y_i^q - x_i^q y_i) over n_pairs + 1 pairs, in P^{2 n_pairs + 1}.
HomogPoly katz_hypersurface(std::uint64_t q, unsigned n_pairs);

struct AntiBertini {
    enum class Kind { AllSingular, CounterexampleFound };
    Kind kind = Kind::AllSingular;
    struct Witness {
        HomogPoly g;
        ClosedPoint point;
    };
    std::vector<Witness> witnesses;       // AllSingular: one per g
    std::optional<HomogPoly> counterexample;
    smooth::Verdict verdict;              // CounterexampleFound
    std::uint64_t checked = 0;
    unsigned bound = 0;
};

const char* to_string(AntiBertini::Kind k);

/// Every nonzero g of degree 1..d_max (up to scalar, leading coefficient 1)
/// against H_g ∩ X. BudgetExceeded when there are more than `budget` of them.
AntiBertini verify_anti_bertini(const SubschemeSpec& x, unsigned d_max, std::uint64_t budget = 1u << 20,
                                std::optional<unsigned> bound = std::nullopt);

/// Smooth X ⊂ P^n of degree in [dx_min, dx_max] such that every H_g, deg g <= d,
/// meets X singularly: X passes through a chosen point P_g of each H_g and is
/// tangent to H_g there. Found results pass verify_anti_bertini(X, d).
SearchResult anti_bertini_search(std::uint64_t q, unsigned n, unsigned d, unsigned dx_min, unsigned dx_max,
                                 std::uint64_t budget, std::uint64_t seed);

/// Nonzero forms of degree d with first nonzero coefficient 1, in canonical order.
std::vector<HomogPoly> forms_up_to_scalar(const gf::FieldPtr& field, unsigned n, unsigned d, std::uint64_t budget);

}  // namespace bertini::construct
