#pragma once

#include "adp/adp.hpp"
#include "adp/processors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace adp {

// -- syntactic side conditions -------------------------------------------------

// Non-overlapping: no left-hand side unifies with a non-variable subterm of
// another left-hand side (renamed apart), no lhs unifies with a proper
// non-variable subterm of itself, and no two distinct rules have unifiable
// left-hand sides.
bool is_non_overlapping(const std::vector<Term> &lhss);
bool is_non_overlapping(const AdpProblem &problem, const std::set<size_t> &adp_indices);

// L: every variable occurs at most once in the lhs and in each support term.
bool is_linear(const Adp &adp);
// NE: every lhs variable occurs in each support term.
bool is_non_erasing(const Adp &adp);

// Which soundness case of the rewriting processor applies.
enum class SideCondition {
    NonOverlappingLinearNonErasing, // NO + rule L and NE
    NonOverlappingTrivial,          // NO + all usable rules {1:r}^true
    NonOverlappingGroundInnermost,  // NO + ground redex + innermost step
};

std::string to_string(SideCondition c);

struct RewriteOutcome {
    bool ok = false;
    std::string error; // side-condition-unmet / annotation-below-tau / no-rule-applicable
    SideCondition side_condition{};
    size_t rule_index = 0; // ADP used for the step
    AdpProblem child;
};

// Rewriting processor: rewrites the redex r_j|tau of the chosen ADP with a
// flag-true ADP (the redex need not be in ANF), splicing p_j * q_e into the
// distribution and keeping a flattened copy of the original ADP.
RewriteOutcome proc_rewriting(const AdpProblem &problem, size_t adp_index, size_t j,
                              const Position &tau);

// -- narrowing-based instantiation --------------------------------------------

struct NarrowingCandidate {
    Position tau;      // position inside t
    size_t adp_index;  // rule whose (renamed) lhs unifies there
    Substitution delta;
};

// All narrowing substitutions of a flattened annotated subterm t: mgu of
// t|tau with a renamed rule lhs such that both instantiated left-hand sides
// are in ANF. `host_lhs` is the lhs of the ADP t was taken from.
std::vector<NarrowingCandidate> narrowing_substitutions(const Term &t, const Term &host_lhs,
                                                        const AdpProblem &problem);

// A subterm t' is captured iff each of its narrowing substitutions is an
// instance of some delta (checked by matching on the instantiated terms).
bool is_captured(const Term &t_prime, const Term &host_lhs,
                 const std::vector<Substitution> &deltas, const std::set<VarId> &adp_vars,
                 const AdpProblem &problem);

struct TransformOutcome {
    bool ok = false;
    std::string error;
    AdpProblem child;
    size_t generated = 0; // size of the instantiation set N
};

// Instantiation: specialize the chosen ADP with the mgus of capped annotated
// subterms of all (renamed) predecessors against its annotated lhs.
TransformOutcome proc_instantiation(const AdpProblem &problem, size_t adp_index);

// Forward instantiation: like instantiation, but over successors, with the
// cap computed against the reversed usable rules of each annotated subterm.
TransformOutcome proc_forward_instantiation(const AdpProblem &problem, size_t adp_index);

// Rule overlap instantiation: instantiates the chosen ADP by all narrowing
// substitutions of the subterm t at (j, t_pos) and adds a residual ADP that
// keeps only the annotations of non-captured subterms. Performs no rewrite
// step.
TransformOutcome proc_rule_overlap_instantiation(const AdpProblem &problem, size_t adp_index,
                                                 size_t j, const Position &t_pos);

} // namespace adp
