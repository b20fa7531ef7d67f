#pragma once

#include "adp/adp.hpp"
#include "adp/polysolve.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace adp {

// Over-approximated control-flow graph between ADPs. Only ADPs whose
// right-hand side carries an annotation can be edge sources; targets are
// arbitrary. Witnesses record which annotated subterm produced an edge.
struct DependencyGraph {
    size_t node_count = 0;
    std::set<std::pair<size_t, size_t>> edges;
    // (source, target) -> positions (j, pos-in-r_j) of witnessing subterms
    std::map<std::pair<size_t, size_t>, std::vector<std::pair<size_t, Position>>> witnesses;

    bool has_edge(size_t from, size_t to) const { return edges.count({from, to}) > 0; }
};

DependencyGraph dependency_graph(const AdpProblem &problem);

// Maximal cycles of the graph: Tarjan SCCs that contain at least one edge.
// Ordered by smallest member index.
std::vector<std::vector<size_t>> nontrivial_sccs(const DependencyGraph &graph);

struct ProcessorResult {
    bool changed = false;
    std::vector<AdpProblem> children;
};

// One child per nontrivial SCC (SCC kept, everything else flattened); a
// single fully flattened child when the graph has no cycle at all.
ProcessorResult proc_dependency_graph(const AdpProblem &problem,
                                      std::vector<std::vector<size_t>> *sccs_out = nullptr);

// Removes annotations from the roots of non-usable rhs subterms: those that
// cannot reach an instantiated left-hand side of an annotation-carrying ADP.
ProcessorResult proc_usable_terms(const AdpProblem &problem,
                                  std::vector<std::string> *removed_out = nullptr);

// Least fixpoint of the usable-rules closure for a single (annotated) term.
std::set<size_t> usable_rules_closure(const Term &t, const AdpProblem &problem);

// Usable rules of the whole problem: union over the annotated subterms of
// all right-hand sides.
std::set<size_t> usable_rules(const AdpProblem &problem);

// Turns the flag of all non-usable ADPs to false.
ProcessorResult proc_usable_rules(const AdpProblem &problem,
                                  std::vector<size_t> *deflagged_out = nullptr);

struct RpResult {
    bool ok = false;
    std::string error; // condition-violated(...) / empty-strict-set
    std::vector<size_t> strict_set;
    AdpProblem child;
};

// Verifies the reduction-pair conditions under `pol` and flattens the strict
// set. Fails when a condition is violated or no ADP decreases strictly.
RpResult proc_reduction_pair(const AdpProblem &problem, const Interpretation &pol);

struct PrResult {
    bool ok = false;
    std::string error;
    AdpProblem child; // same ADPs, classical mode
};

// Probability removal: requires every distribution to be a singleton; tags
// the problem as classical, which the engine reports via the (dp, np)
// presentation. The pipeline itself is unchanged (trivial ADP problems
// subsume classical DP problems).
PrResult proc_probability_removal(const AdpProblem &problem);

// Shared estimation primitive: can an instance of `source#` reach an
// instance of `target_lhs#` via np(P) steps, with both instantiated
// left-hand sides in ANF? Implemented as rename + cap + unify.
bool cap_reachability(const Term &source_flat, const Term &host_lhs, const Term &target_lhs,
                      const Ptrs &np_rules, const Ptrs &flat_rules);

} // namespace adp
