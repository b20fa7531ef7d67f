#include "adp/engine.hpp"

#include "adp/processors.hpp"
#include "adp/transforms.hpp"

#include <atomic>
#include <chrono>
#include <future>
#include <map>
#include <mutex>
#include <set>

namespace adp {

namespace {

using Clock = std::chrono::steady_clock;

struct SolveContext {
    const Config &cfg;
    Clock::time_point deadline;
    // interpretation-search results per problem key; repeat visits (e.g.
    // right after the probability-removal tag) are common
    std::map<std::string, std::optional<Interpretation>> search_cache;
    std::mutex cache_mu;
    // global cap across all branches; per-branch budgets reset at real
    // decompositions, this keeps the whole search finite anyway
    std::atomic<uint64_t> transforms_used{0};

    bool out_of_time() const { return Clock::now() >= deadline; }
    bool transforms_capped() { return transforms_used >= uint64_t(cfg.transform_depth) * 64; }
};

void positions_post_order_rec(const Term &t, Position &prefix, std::vector<Position> &out) {
    if (t.is_var())
        return;
    for (uint32_t i = 0; i < t.args().size(); ++i) {
        prefix.push_back(i + 1);
        positions_post_order_rec(t.args()[i], prefix, out);
        prefix.pop_back();
    }
    out.push_back(prefix);
}

std::vector<Position> positions_post_order(const Term &t) {
    std::vector<Position> out;
    Position prefix;
    positions_post_order_rec(t, prefix, out);
    return out;
}

struct TransformStep {
    std::string processor;
    Justification just;
    AdpProblem child;
    int kind = 0;
};

// per-branch budgets, one per transform kind
struct TransformBudget {
    unsigned roi, rewriting, inst, finst;

    explicit TransformBudget(unsigned each) : roi(each), rewriting(each), inst(each), finst(each) {}
    bool any() const { return roi + rewriting + inst + finst > 0; }
    void charge(int kind) {
        unsigned &slot = kind == 0 ? roi : kind == 1 ? rewriting : kind == 2 ? inst : finst;
        if (slot > 0)
            --slot;
    }
};

// Transformational fallback, tried in order: rule overlap instantiation,
// rewriting, instantiation, forward instantiation. A candidate is accepted
// only if its child has not been seen on this branch (flattened canonical
// key), so self-reproducing transformations cannot loop.
std::optional<TransformStep> pick_transform(const AdpProblem &problem,
                                            const std::set<std::string> &seen,
                                            const SolveContext &ctx,
                                            const TransformBudget &budget) {
    auto unseen = [&](const AdpProblem &child) {
        return seen.count(flattened_problem_key(child)) == 0;
    };

    // rule overlap instantiation: needs at least one properly instantiating
    // narrowing substitution, otherwise the child only grows the problem
    for (size_t i = 0; budget.roi > 0 && i < problem.size(); ++i) {
        if (ctx.out_of_time())
            return std::nullopt;
        const Adp &adp = problem[i];
        if (!adp.has_annotations())
            continue;
        std::set<VarId> adp_vars = vars_of(adp.lhs);
        for (size_t j = 0; j < adp.rhs.size(); ++j) {
            for (const auto &[pos, t] : annotated_subterms(adp.rhs.term(j))) {
                std::vector<NarrowingCandidate> cands =
                    narrowing_substitutions(t, adp.lhs, problem);
                bool proper = false;
                for (const NarrowingCandidate &c : cands)
                    if (!restricts_to_renaming(c.delta, adp_vars))
                        proper = true;
                if (!proper)
                    continue;
                TransformOutcome outcome = proc_rule_overlap_instantiation(problem, i, j, pos);
                if (outcome.ok && unseen(outcome.child))
                    return TransformStep{"rule_overlap_instantiation",
                                         JustRoi{i, j, pos, outcome.generated}, outcome.child, 0};
            }
        }
    }

    // rewriting: innermost-leftmost unannotated defined position whose side
    // conditions hold, in support order
    for (size_t i = 0; budget.rewriting > 0 && i < problem.size(); ++i) {
        if (ctx.out_of_time())
            return std::nullopt;
        const Adp &adp = problem[i];
        if (!adp.has_annotations())
            continue;
        for (size_t j = 0; j < adp.rhs.size(); ++j) {
            for (const Position &tau : positions_post_order(adp.rhs.term(j))) {
                Term sub = subterm_at(adp.rhs.term(j), tau);
                if (sub.is_var() || has_annotation(sub) || !problem.defined().count(sub.sym()))
                    continue;
                RewriteOutcome outcome = proc_rewriting(problem, i, j, tau);
                if (outcome.ok && unseen(outcome.child))
                    return TransformStep{
                        "rewriting", JustRewrite{i, j, tau, outcome.rule_index, outcome.side_condition},
                        outcome.child, 1};
            }
        }
    }

    for (size_t i = 0; budget.inst > 0 && i < problem.size(); ++i) {
        if (ctx.out_of_time())
            return std::nullopt;
        if (!problem[i].has_annotations())
            continue;
        TransformOutcome outcome = proc_instantiation(problem, i);
        if (outcome.ok && outcome.generated > 0 && unseen(outcome.child))
            return TransformStep{"instantiation", JustInst{i, outcome.generated}, outcome.child, 2};
    }

    for (size_t i = 0; budget.finst > 0 && i < problem.size(); ++i) {
        if (ctx.out_of_time())
            return std::nullopt;
        if (!problem[i].has_annotations())
            continue;
        TransformOutcome outcome = proc_forward_instantiation(problem, i);
        if (outcome.ok && outcome.generated > 0 && unseen(outcome.child))
            return TransformStep{"forward_instantiation", JustFinst{i, outcome.generated},
                                 outcome.child, 3};
    }

    return std::nullopt;
}

size_t template_count(const AdpProblem &problem, bool cross) {
    std::set<SymbolId> symbols;
    std::function<void(const Term &)> scan = [&](const Term &t) {
        if (t.is_var())
            return;
        symbols.insert(t.sym());
        for (const Term &a : t.args())
            scan(a);
    };
    for (const Adp &adp : problem.adps()) {
        scan(adp.lhs);
        for (const auto &[p, r] : adp.rhs.entries())
            scan(r);
    }
    size_t count = 0;
    for (SymbolId sym : symbols) {
        uint32_t arity = symbol_info(sym).arity;
        size_t per = cross && arity <= 5 ? (size_t(1) << arity) : arity + 1;
        count += per * (problem.defined().count(sym) ? 2 : 1);
    }
    return count;
}

std::optional<Interpretation> find_interpretation(const AdpProblem &problem, SolveContext &ctx) {
    std::string key = problem_key(problem);
    {
        std::lock_guard<std::mutex> lock(ctx.cache_mu);
        auto it = ctx.search_cache.find(key);
        if (it != ctx.search_cache.end())
            return it->second;
    }
    std::optional<Interpretation> found = [&]() -> std::optional<Interpretation> {
    SearchOptions opts;
    opts.max_coeff = ctx.cfg.max_coeff;
    opts.cross_terms = false;
    opts.node_budget = ctx.cfg.search_node_budget;
    if (auto pol = search_interpretation(problem, opts))
        return pol;
    if (ctx.out_of_time())
        return std::nullopt;
    // escalation: multilinear cross terms with a slightly larger coefficient
    // range, kept to problems whose template space stays small
    if (template_count(problem, true) <= 48) {
        opts.max_coeff = std::max(3u, ctx.cfg.max_coeff);
        opts.cross_terms = true;
        if (auto pol = search_interpretation(problem, opts))
            return pol;
    }
    return std::nullopt;
    }();
    std::lock_guard<std::mutex> lock(ctx.cache_mu);
    ctx.search_cache.emplace(key, found);
    return found;
}

ProofNode solve(AdpProblem problem, SolveContext &ctx, std::set<std::string> seen,
                TransformBudget budget);

std::vector<ProofNode> solve_children(std::vector<AdpProblem> children, SolveContext &ctx,
                                      const std::set<std::string> &seen,
                                      const TransformBudget &budget) {
    std::vector<ProofNode> out;
    if (ctx.cfg.jobs > 1 && children.size() > 1) {
        std::vector<std::future<ProofNode>> futures;
        futures.reserve(children.size());
        for (AdpProblem &child : children)
            futures.push_back(std::async(std::launch::async, [&ctx, &seen, budget,
                                                              problem = std::move(child)]() mutable {
                return solve(std::move(problem), ctx, seen, budget);
            }));
        for (auto &f : futures)
            out.push_back(f.get());
        return out;
    }
    for (AdpProblem &child : children)
        out.push_back(solve(std::move(child), ctx, seen, budget));
    return out;
}

ProofNode solve(AdpProblem problem, SolveContext &ctx, std::set<std::string> seen,
                TransformBudget budget) {
    // a linear chain of processor applications, folded into a nested proof
    struct Step {
        AdpProblem problem;
        std::string processor;
        Justification just;
    };
    std::vector<Step> trail;
    std::string last_attempt = "dependency_graph";

    auto finish = [&](ProofNode leaf) {
        while (!trail.empty()) {
            ProofNode node{std::move(trail.back().problem), std::move(trail.back().processor),
                           std::move(trail.back().just), {}};
            node.children.push_back(std::move(leaf));
            leaf = std::move(node);
            trail.pop_back();
        }
        return leaf;
    };

    while (true) {
        if (ctx.out_of_time())
            return finish(
                {problem, "failed", JustFailed{"timeout; last attempted: " + last_attempt}, {}});
        if (is_solved(problem)) {
            AdpProblem copy = problem;
            return finish({std::move(copy), "solved", JustSolved{}, {}});
        }
        seen.insert(flattened_problem_key(problem));

        std::vector<std::vector<size_t>> sccs;
        ProcessorResult dg = proc_dependency_graph(problem, &sccs);
        if (dg.changed) {
            DependencyGraph graph = dependency_graph(problem);
            JustDg just{sccs, {graph.edges.begin(), graph.edges.end()}};
            if (dg.children.size() == 1) {
                trail.push_back({problem, "dependency_graph", just});
                problem = std::move(dg.children.front());
                continue;
            }
            ProofNode node{problem, "dependency_graph", just, {}};
            // a real decomposition starts fresh branches
            node.children = solve_children(std::move(dg.children), ctx, seen,
                                           TransformBudget(ctx.cfg.transform_depth));
            return finish(std::move(node));
        }

        last_attempt = "usable_terms";
        std::vector<std::string> removed;
        ProcessorResult ut = proc_usable_terms(problem, &removed);
        if (ut.changed) {
            trail.push_back({problem, "usable_terms", JustUt{std::move(removed)}});
            problem = std::move(ut.children.front());
            continue;
        }

        last_attempt = "usable_rules";
        std::vector<size_t> deflagged;
        ProcessorResult ur = proc_usable_rules(problem, &deflagged);
        if (ur.changed) {
            trail.push_back({problem, "usable_rules", JustUr{std::move(deflagged)}});
            problem = std::move(ur.children.front());
            continue;
        }

        last_attempt = "reduction_pair";
        if (auto pol = find_interpretation(problem, ctx)) {
            RpResult rp = proc_reduction_pair(problem, *pol);
            if (rp.ok) {
                trail.push_back({problem, "reduction_pair", JustRp{*pol, rp.strict_set}});
                problem = std::move(rp.child);
                continue;
            }
        }

        if (!problem.classical()) {
            bool all_trivial = true;
            for (const Adp &adp : problem.adps())
                if (!adp.rhs.singleton())
                    all_trivial = false;
            if (all_trivial) {
                PrResult pr = proc_probability_removal(problem);
                trail.push_back({problem, "probability_removal", JustPr{}});
                problem = std::move(pr.child);
                continue;
            }
        }

        if (ctx.cfg.enable_transforms && budget.any() && !ctx.transforms_capped()) {
            last_attempt = "transformations";
            if (auto step = pick_transform(problem, seen, ctx, budget)) {
                trail.push_back({problem, step->processor, std::move(step->just)});
                problem = std::move(step->child);
                budget.charge(step->kind);
                ++ctx.transforms_used;
                continue;
            }
        }

        return finish({problem, "failed",
                       JustFailed{"no applicable processor; last attempted: " + last_attempt}, {}});
    }
}

void collect_failures(const ProofNode &node, std::vector<std::string> &out) {
    if (node.children.empty()) {
        if (node.processor == "failed")
            out.push_back(std::get<JustFailed>(node.just).reason);
        return;
    }
    for (const ProofNode &child : node.children)
        collect_failures(child, out);
}

} // namespace

Verdict prove(const Ptrs &system, const Config &cfg) {
    SolveContext ctx{cfg, Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                             std::chrono::duration<double>(cfg.timeout_seconds))};
    AdpProblem root_problem = canonical_adps(system);

    Verdict verdict;
    verdict.root = solve(root_problem, ctx, {}, TransformBudget(cfg.transform_depth));
    verdict.timed_out = ctx.out_of_time();

    if (verdict.root.solved()) {
        std::string why;
        if (reverify(verdict.root, &why)) {
            verdict.yes = true;
        } else {
            verdict.failure_summary = "proof re-verification failed: " + why;
        }
        return verdict;
    }
    std::vector<std::string> failures;
    collect_failures(verdict.root, failures);
    std::string summary;
    for (size_t i = 0; i < failures.size(); ++i) {
        if (i)
            summary += "; ";
        summary += failures[i];
    }
    verdict.failure_summary = summary.empty() ? "open sub-problems remain" : summary;
    return verdict;
}

std::string render_proof(const Verdict &verdict, const std::string &format) {
    if (format == "machine")
        return render_machine(verdict.root, verdict.yes, verdict.failure_summary);
    return render_text(verdict.root, verdict.yes, verdict.failure_summary);
}

} // namespace adp
