#include "adp/processors.hpp"

#include <algorithm>
#include <functional>

namespace adp {

// ------------------------------------------------------------ reachability

bool cap_reachability(const Term &source_flat, const Term &host_lhs, const Term &target_lhs,
                      const Ptrs &np_rules, const Ptrs &flat_rules) {
    // rename the source side (host lhs and subterm together) apart from the
    // target, cap what np(P) can rewrite below the annotated root, and unify
    Substitution renaming = renaming_for(vars_of(host_lhs));
    for (VarId v : vars_of(source_flat))
        renaming.bind(v, Term::var(fresh_var()));
    Term source = renaming.apply(annotate_root(source_flat));
    Term host = renaming.apply(host_lhs);

    CapOptions opts;
    opts.protect_root = true;
    Term capped = cap(source, np_rules.defined(), opts);
    auto delta = unify(capped, annotate_root(target_lhs));
    if (!delta)
        return false;
    return is_anf(delta->apply(host), flat_rules) && is_anf(delta->apply(target_lhs), flat_rules);
}

// --------------------------------------------------------- dependency graph

DependencyGraph dependency_graph(const AdpProblem &problem) {
    DependencyGraph graph;
    graph.node_count = problem.size();
    Ptrs np_rules = np(problem);
    Ptrs flat_rules = problem.flattened();
    for (size_t from = 0; from < problem.size(); ++from) {
        const Adp &src = problem[from];
        for (size_t j = 0; j < src.rhs.size(); ++j) {
            for (const auto &[pos, t] : annotated_subterms(src.rhs.term(j))) {
                for (size_t to = 0; to < problem.size(); ++to) {
                    if (t.sym() != problem[to].lhs.sym())
                        continue;
                    if (cap_reachability(t, src.lhs, problem[to].lhs, np_rules, flat_rules)) {
                        graph.edges.insert({from, to});
                        graph.witnesses[{from, to}].emplace_back(j, pos);
                    }
                }
            }
        }
    }
    return graph;
}

namespace {

struct TarjanState {
    const DependencyGraph &graph;
    std::vector<std::vector<size_t>> succ;
    std::vector<int> index, low, on_stack;
    std::vector<size_t> stack;
    int counter = 0;
    std::vector<std::vector<size_t>> sccs;

    explicit TarjanState(const DependencyGraph &g)
        : graph(g), succ(g.node_count), index(g.node_count, -1), low(g.node_count, 0),
          on_stack(g.node_count, 0) {
        for (const auto &[a, b] : g.edges)
            succ[a].push_back(b);
    }

    void visit(size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
        for (size_t w : succ[v]) {
            if (index[w] < 0) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<size_t> scc;
            while (true) {
                size_t w = stack.back();
                stack.pop_back();
                on_stack[w] = 0;
                scc.push_back(w);
                if (w == v)
                    break;
            }
            std::sort(scc.begin(), scc.end());
            sccs.push_back(std::move(scc));
        }
    }
};

} // namespace

std::vector<std::vector<size_t>> nontrivial_sccs(const DependencyGraph &graph) {
    TarjanState state(graph);
    for (size_t v = 0; v < graph.node_count; ++v)
        if (state.index[v] < 0)
            state.visit(v);
    std::vector<std::vector<size_t>> out;
    for (auto &scc : state.sccs) {
        bool cyclic = scc.size() > 1 || graph.has_edge(scc[0], scc[0]);
        if (cyclic)
            out.push_back(std::move(scc));
    }
    std::sort(out.begin(), out.end(),
              [](const auto &a, const auto &b) { return a.front() < b.front(); });
    return out;
}

ProcessorResult proc_dependency_graph(const AdpProblem &problem,
                                      std::vector<std::vector<size_t>> *sccs_out) {
    DependencyGraph graph = dependency_graph(problem);
    std::vector<std::vector<size_t>> sccs = nontrivial_sccs(graph);
    if (sccs_out)
        *sccs_out = sccs;

    ProcessorResult result;
    if (sccs.empty()) {
        std::vector<Adp> adps;
        for (const Adp &adp : problem.adps())
            adps.push_back(flatten(adp));
        result.children.emplace_back(std::move(adps), problem.classical());
        result.changed = !(result.children.front() == problem);
        return result;
    }
    for (const auto &scc : sccs) {
        std::set<size_t> keep(scc.begin(), scc.end());
        std::vector<Adp> adps;
        adps.reserve(problem.size());
        for (size_t i = 0; i < problem.size(); ++i)
            adps.push_back(keep.count(i) ? problem[i] : flatten(problem[i]));
        result.children.emplace_back(std::move(adps), problem.classical());
    }
    result.changed = result.children.size() > 1 || !(result.children.front() == problem);
    return result;
}

// ------------------------------------------------------------- usable terms

ProcessorResult proc_usable_terms(const AdpProblem &problem, std::vector<std::string> *removed_out) {
    Ptrs np_rules = np(problem);
    Ptrs flat_rules = problem.flattened();
    std::set<SymbolId> defined = problem.defined();

    // candidate targets: ADPs whose rhs still carries an annotation
    std::vector<size_t> targets;
    for (size_t i = 0; i < problem.size(); ++i)
        if (problem[i].has_annotations())
            targets.push_back(i);

    std::vector<Adp> adps;
    adps.reserve(problem.size());
    bool changed = false;
    for (size_t i = 0; i < problem.size(); ++i) {
        const Adp &adp = problem[i];
        std::vector<std::pair<Rat, Term>> rhs;
        for (size_t j = 0; j < adp.rhs.size(); ++j) {
            const Term &r = adp.rhs.term(j);
            std::set<Position> keep;
            for (const auto &[pos, t] : annotated_subterms(r)) {
                bool usable = false;
                for (size_t to : targets) {
                    if (t.sym() != problem[to].lhs.sym())
                        continue;
                    if (cap_reachability(t, adp.lhs, problem[to].lhs, np_rules,
                                         flat_rules)) {
                        usable = true;
                        break;
                    }
                }
                if (usable) {
                    keep.insert(pos);
                } else {
                    changed = true;
                    if (removed_out)
                        removed_out->push_back("(" + std::to_string(i) + ") " + t.str() + " at " +
                                               to_string(pos));
                }
            }
            rhs.emplace_back(adp.rhs.prob(j), annotate(r, keep, defined));
        }
        adps.push_back({adp.lhs, MultiDistribution(std::move(rhs)), adp.flag});
    }
    ProcessorResult result;
    result.changed = changed;
    result.children.emplace_back(std::move(adps), problem.classical());
    return result;
}

// ------------------------------------------------------------- usable rules

namespace {

// Annotated roots contribute nothing: a step there is a p-step, tracked by
// the dependency graph, and right-hand sides are traversed as written. This
// keeps the closure in line with the worked derivations (the fully
// flattened closure would make everything reachable through an annotated
// symbol usable as well).
void usable_rules_rec(const Term &t, const AdpProblem &problem, std::set<size_t> &acc,
                      std::set<size_t> &visiting) {
    if (t.is_var())
        return;
    for (const Term &a : t.args())
        usable_rules_rec(a, problem, acc, visiting);
    if (t.annotated())
        return;
    for (size_t i = 0; i < problem.size(); ++i) {
        const Adp &adp = problem[i];
        if (!adp.flag || adp.lhs.sym() != t.sym())
            continue;
        acc.insert(i);
        if (!visiting.insert(i).second)
            continue; // this ADP's right-hand sides are already expanded
        for (const auto &[p, r] : adp.rhs.entries())
            usable_rules_rec(r, problem, acc, visiting);
    }
}

} // namespace

std::set<size_t> usable_rules_closure(const Term &t, const AdpProblem &problem) {
    std::set<size_t> acc, visiting;
    usable_rules_rec(t, problem, acc, visiting);
    return acc;
}

std::set<size_t> usable_rules(const AdpProblem &problem) {
    std::set<size_t> acc, visiting;
    for (const Adp &adp : problem.adps())
        for (const auto &[p, r] : adp.rhs.entries())
            for (const auto &[pos, t] : annotated_subterms(r))
                usable_rules_rec(annotate_root(t), problem, acc, visiting);
    return acc;
}

ProcessorResult proc_usable_rules(const AdpProblem &problem, std::vector<size_t> *deflagged_out) {
    std::set<size_t> usable = usable_rules(problem);
    std::vector<Adp> adps;
    adps.reserve(problem.size());
    bool changed = false;
    for (size_t i = 0; i < problem.size(); ++i) {
        Adp adp = problem[i];
        if (adp.flag && !usable.count(i)) {
            adp.flag = false;
            changed = true;
            if (deflagged_out)
                deflagged_out->push_back(i);
        }
        adps.push_back(std::move(adp));
    }
    ProcessorResult result;
    result.changed = changed;
    result.children.emplace_back(std::move(adps), problem.classical());
    return result;
}

// ------------------------------------------------------------ reduction pair

RpResult proc_reduction_pair(const AdpProblem &problem, const Interpretation &pol) {
    RpResult result;
    RpCheck check = check_reduction_pair(problem, pol);
    if (!check.conditions_ok || check.strict_set.empty()) {
        result.error = check.violation;
        return result;
    }
    std::set<size_t> strict(check.strict_set.begin(), check.strict_set.end());
    std::vector<Adp> adps;
    adps.reserve(problem.size());
    for (size_t i = 0; i < problem.size(); ++i)
        adps.push_back(strict.count(i) ? flatten(problem[i]) : problem[i]);
    result.ok = true;
    result.strict_set = check.strict_set;
    result.child = AdpProblem(std::move(adps), problem.classical());
    return result;
}

// ------------------------------------------------------- probability removal

PrResult proc_probability_removal(const AdpProblem &problem) {
    PrResult result;
    for (const Adp &adp : problem.adps()) {
        if (!adp.rhs.singleton()) {
            result.error = "nontrivial distribution: " + adp.str();
            return result;
        }
    }
    result.ok = true;
    result.child = AdpProblem(problem.adps(), true);
    return result;
}

} // namespace adp
