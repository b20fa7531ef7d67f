#pragma once

#include "adp/adp.hpp"
#include "adp/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace adp {

class PolyError : public std::runtime_error {
public:
    explicit PolyError(const std::string &what) : std::runtime_error(what) {}
};

// Monomial over term variables: sorted, repeats encode exponents. Symbol
// templates are multilinear, but composing them can square a variable
// (F(z,z) under x1*x2), and the comparisons must see that exactly.
using Mono = std::vector<VarId>;

// Polynomial over term variables with rational coefficients.
class Poly {
public:
    Poly() = default;
    static Poly constant(const Rat &c);
    static Poly variable(VarId v);

    Poly operator+(const Poly &other) const;
    Poly operator-(const Poly &other) const;
    Poly operator*(const Poly &other) const;
    Poly scaled(const Rat &c) const;

    const std::map<Mono, Rat> &coeffs() const { return coeffs_; }
    Rat coeff(const Mono &m) const;
    bool is_zero() const { return coeffs_.empty(); }
    Rat eval(const std::map<VarId, Rat> &assignment) const;
    std::string str() const;
    bool operator==(const Poly &other) const { return coeffs_ == other.coeffs_; }

private:
    void add_coeff(const Mono &m, const Rat &c);
    std::map<Mono, Rat> coeffs_; // no zero entries
};

// Per-symbol template: a multilinear polynomial over the argument positions,
// keyed by bitmask (bit i set = argument i+1 occurs in the monomial).
// Natural coefficients keep every interpretation weakly monotonic.
struct SymPoly {
    std::map<uint32_t, Rat> coeffs;

    bool operator==(const SymPoly &other) const { return coeffs == other.coeffs; }
    std::string str(uint32_t arity) const;
};

// Interpretation of plain and annotated symbols; the two are independent.
struct Interpretation {
    std::map<std::pair<SymbolId, bool>, SymPoly> entries;

    const SymPoly *find(SymbolId sym, bool annotated) const;
    void set(SymbolId sym, bool annotated, SymPoly poly) { entries[{sym, annotated}] = std::move(poly); }
    std::string str() const;
    bool operator==(const Interpretation &other) const { return entries == other.entries; }
};

// Compositional interpretation of a term; throws PolyError on missing symbols.
Poly interpret(const Term &t, const Interpretation &pol);

enum class ExpectationMode { Plain, AnnotatedSum };

// Plain: sum p_j * Pol(flatten(r_j)). AnnotatedSum: sum p_j * sum over
// annotated subterms t of r_j of Pol(t#).
Poly expected_value(const MultiDistribution &mu, const Interpretation &pol, ExpectationMode mode);

Poly annotated_subterm_sum(const Term &r, const Interpretation &pol);

// Absolute positiveness: sound, incomplete comparison for all natural
// variable assignments.
bool check_geq(const Poly &p, const Poly &q);
bool check_gt(const Poly &p, const Poly &q); // check_geq and constant difference >= 1

// Full reduction-pair condition check for an ADP problem under an
// interpretation (the independent re-checker used by the processor and by
// proof replay).
struct RpCheck {
    bool conditions_ok = false;       // (1) and (2)
    std::vector<size_t> strict_set;   // ADPs eligible for P_> under (3)
    std::string violation;            // first violated condition, for diagnostics
};

RpCheck check_reduction_pair(const AdpProblem &problem, const Interpretation &pol);

struct SearchOptions {
    unsigned max_coeff = 2;
    bool cross_terms = false;
    uint64_t node_budget = 150'000;
};

// Searches for natural-coefficient templates satisfying the reduction-pair
// conditions with a nonempty strict set that contains at least one ADP with
// annotations (so that flattening it makes progress). Deterministic; returns
// nullopt when the space is exhausted or the budget runs out.
std::optional<Interpretation> search_interpretation(const AdpProblem &problem,
                                                    const SearchOptions &opts);

} // namespace adp
