#pragma once

#include "adp/ptrs.hpp"

#include <string>
#include <vector>

namespace adp {

// Annotated dependency pair l -> {p1:r1,...,pk:rk}^m. The left-hand side is
// annotation-free; right-hand sides may carry annotations on defined symbols.
// The flag m says whether the ADP may still be used for rewrite steps below
// the position of a later step at an annotated symbol.
struct Adp {
    Term lhs;
    MultiDistribution rhs;
    bool flag = true;

    bool operator==(const Adp &other) const {
        return flag == other.flag && lhs == other.lhs && rhs == other.rhs;
    }
    bool has_annotations() const;
    std::string str() const;
};

// A finite set of ADPs; the unit of proof search. `classical` marks problems
// that went through the probability removal processor (all distributions
// trivial), which is presentation-only: the same processors stay sound.
class AdpProblem {
public:
    AdpProblem() = default;
    explicit AdpProblem(std::vector<Adp> adps, bool classical = false);

    const std::vector<Adp> &adps() const { return adps_; }
    size_t size() const { return adps_.size(); }
    const Adp &operator[](size_t i) const { return adps_[i]; }
    bool classical() const { return classical_; }
    const std::set<SymbolId> &defined() const { return defined_; }

    Ptrs flattened() const; // b(P), the underlying PTRS
    std::string str() const;
    bool operator==(const AdpProblem &other) const {
        return classical_ == other.classical_ && adps_ == other.adps_;
    }

private:
    std::vector<Adp> adps_;
    std::set<SymbolId> defined_;
    bool classical_ = false;
};

Adp flatten(const Adp &adp);

// Canonical ADPs: every rhs term fully annotated at defined positions,
// flag true (DP(R)).
AdpProblem canonical_adps(const Ptrs &system);

// Non-probabilistic variant np(P): one plain rule per support element of
// every flag-true ADP.
Ptrs np(const AdpProblem &problem);

// Classical dependency pairs dp(P); requires every distribution singleton.
std::vector<std::pair<Term, Term>> dp(const AdpProblem &problem);

// True iff no right-hand side contains an annotation (trivially iAST).
bool is_solved(const AdpProblem &problem);

enum class StepCase { PR, P, R, IRR };

std::string to_string(StepCase c);

struct AdpStep {
    Position pos;
    size_t adp_index;
    Substitution sigma;
    StepCase step_case;
    MultiDistribution successors;
};

// The annotated rewrite relation of ADP problems: enumerates all steps
// s => mu, including the case-dependent annotation handling. Substitution
// images are annotation-free by construction (matching is done on the
// flattened redex).
std::vector<AdpStep> adp_steps(const Term &s, const AdpProblem &problem);

// Alpha-canonical variant: variables renamed to _c0, _c1, ... in order of
// first occurrence (lhs first, then the support terms).
Adp canonical_variant(const Adp &adp);
bool alpha_equal(const Adp &a, const Adp &b);

// Canonical string keys modulo variable renaming and ADP order. The
// flattened key additionally ignores annotations and flags; it is the
// transform-loop guard.
std::string problem_key(const AdpProblem &problem);
std::string flattened_problem_key(const AdpProblem &problem);

} // namespace adp
