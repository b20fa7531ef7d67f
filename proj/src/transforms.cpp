#include "adp/transforms.hpp"

#include <algorithm>

namespace adp {

// ------------------------------------------------------------ side conditions

bool is_non_overlapping(const std::vector<Term> &lhss) {
    for (size_t i = 0; i < lhss.size(); ++i) {
        Term li = rename_fresh(lhss[i]);
        for (size_t k = 0; k < lhss.size(); ++k) {
            const Term &lk = lhss[k];
            // every non-variable position of lk; the root only for distinct rules
            std::vector<std::pair<Position, Term>> spots;
            std::function<void(const Term &, Position &)> walk = [&](const Term &t, Position &pre) {
                if (t.is_var())
                    return;
                spots.emplace_back(pre, t);
                for (uint32_t a = 0; a < t.args().size(); ++a) {
                    pre.push_back(a + 1);
                    walk(t.args()[a], pre);
                    pre.pop_back();
                }
            };
            Position pre;
            walk(lk, pre);
            for (const auto &[pos, sub] : spots) {
                if (i == k && pos.empty())
                    continue;
                if (unify(li, sub))
                    return false;
            }
        }
    }
    return true;
}

bool is_non_overlapping(const AdpProblem &problem, const std::set<size_t> &adp_indices) {
    std::vector<Term> lhss;
    for (size_t i : adp_indices)
        lhss.push_back(problem[i].lhs);
    return is_non_overlapping(lhss);
}

bool is_linear(const Adp &adp) {
    if (!is_linear_term(adp.lhs))
        return false;
    for (const auto &[p, r] : adp.rhs.entries())
        if (!is_linear_term(r))
            return false;
    return true;
}

bool is_non_erasing(const Adp &adp) {
    std::set<VarId> lhs_vars = vars_of(adp.lhs);
    for (const auto &[p, r] : adp.rhs.entries()) {
        std::set<VarId> rhs_vars = vars_of(r);
        for (VarId v : lhs_vars)
            if (!rhs_vars.count(v))
                return false;
    }
    return true;
}

std::string to_string(SideCondition c) {
    switch (c) {
    case SideCondition::NonOverlappingLinearNonErasing: return "NO+L+NE";
    case SideCondition::NonOverlappingTrivial: return "NO+trivial-usable-rules";
    case SideCondition::NonOverlappingGroundInnermost: return "NO+ground+innermost";
    }
    return "?";
}

// ------------------------------------------------------------------ helpers

namespace {

// Appends an ADP unless an alpha-equivalent one is already present.
void append_unique(std::vector<Adp> &adps, const Adp &candidate) {
    for (const Adp &existing : adps)
        if (alpha_equal(existing, candidate))
            return;
    adps.push_back(candidate);
}

Adp apply_subst(const Adp &adp, const Substitution &sigma) {
    return {sigma.apply(adp.lhs), adp.rhs.map([&](const Term &t) { return sigma.apply(t); }),
            adp.flag};
}

Adp rename_adp(const Adp &adp) {
    std::set<VarId> vars = vars_of(adp.lhs);
    for (const auto &[p, r] : adp.rhs.entries())
        for (VarId v : vars_of(r))
            vars.insert(v);
    Substitution renaming = renaming_for(vars);
    return apply_subst(adp, renaming);
}

} // namespace

// ------------------------------------------------------------------ rewriting

RewriteOutcome proc_rewriting(const AdpProblem &problem, size_t adp_index, size_t j,
                              const Position &tau) {
    RewriteOutcome out;
    const Adp &target = problem[adp_index];
    if (j >= target.rhs.size()) {
        out.error = "support index out of range";
        return out;
    }
    const Term &rj = target.rhs.term(j);
    if (!valid_position(rj, tau)) {
        out.error = "invalid position " + to_string(tau);
        return out;
    }
    Term redex = subterm_at(rj, tau);
    if (has_annotation(redex)) {
        out.error = "annotation-below-tau";
        return out;
    }
    if (redex.is_var() || !problem.defined().count(redex.sym())) {
        out.error = "no-rule-applicable";
        return out;
    }

    // the applied rule: first flag-true ADP whose lhs matches the redex
    size_t applied = problem.size();
    Substitution sigma;
    for (size_t i = 0; i < problem.size(); ++i) {
        if (!problem[i].flag)
            continue;
        Substitution trial;
        if (match_into(problem[i].lhs, redex, trial)) {
            applied = i;
            sigma = std::move(trial);
            break;
        }
    }
    if (applied == problem.size()) {
        out.error = "no-rule-applicable";
        return out;
    }

    const Adp &rule = problem[applied];
    std::set<size_t> usable = usable_rules_closure(redex, problem);
    if (!is_non_overlapping(problem, usable)) {
        out.error = "side-condition-unmet: usable rules overlap";
        return out;
    }
    bool trivial_usable = true;
    for (size_t u : usable)
        if (!problem[u].rhs.singleton())
            trivial_usable = false;
    if (is_linear(rule) && is_non_erasing(rule)) {
        out.side_condition = SideCondition::NonOverlappingLinearNonErasing;
    } else if (trivial_usable) {
        out.side_condition = SideCondition::NonOverlappingTrivial;
    } else if (is_ground(redex) && is_anf(redex, problem.flattened())) {
        out.side_condition = SideCondition::NonOverlappingGroundInnermost;
    } else {
        out.error = "side-condition-unmet: rule not L+NE, usable rules not trivial, redex not "
                    "ground innermost";
        return out;
    }

    // splice p_j * q_e in place of entry j; tau is unannotated, so the step
    // inserts the flattened right-hand sides (case r with flag true)
    std::vector<std::pair<Rat, Term>> entries;
    for (size_t e = 0; e < target.rhs.size(); ++e) {
        if (e != j) {
            entries.emplace_back(target.rhs.prob(e), target.rhs.term(e));
            continue;
        }
        for (const auto &[q, rprime] : rule.rhs.entries())
            entries.emplace_back(target.rhs.prob(j) * q,
                                 replace_at(rj, tau, sigma.apply(flatten(rprime))));
    }

    std::vector<Adp> adps;
    adps.reserve(problem.size() + 1);
    for (size_t i = 0; i < problem.size(); ++i) {
        if (i != adp_index) {
            adps.push_back(problem[i]);
            continue;
        }
        append_unique(adps, flatten(target));
        adps.push_back({target.lhs, MultiDistribution(std::move(entries)), target.flag});
    }
    out.ok = true;
    out.rule_index = applied;
    out.child = AdpProblem(std::move(adps), problem.classical());
    return out;
}

// ------------------------------------------------------- narrowing machinery

std::vector<NarrowingCandidate> narrowing_substitutions(const Term &t, const Term &host_lhs,
                                                        const AdpProblem &problem) {
    Ptrs flat_rules = problem.flattened();
    std::vector<NarrowingCandidate> out;
    std::function<void(const Term &, Position &)> walk = [&](const Term &sub, Position &pre) {
        if (sub.is_var())
            return;
        for (size_t k = 0; k < problem.size(); ++k) {
            Term renamed_lhs = rename_fresh(problem[k].lhs);
            auto delta = unify(sub, renamed_lhs);
            if (!delta)
                continue;
            if (!is_anf(delta->apply(host_lhs), flat_rules) ||
                !is_anf(delta->apply(renamed_lhs), flat_rules))
                continue;
            out.push_back({pre, k, std::move(*delta)});
        }
        for (uint32_t a = 0; a < sub.args().size(); ++a) {
            pre.push_back(a + 1);
            walk(sub.args()[a], pre);
            pre.pop_back();
        }
    };
    Position pre;
    walk(flatten(t), pre);
    return out;
}

namespace {

// delta more general than rho on the given variables: rho = delta * rho'
bool more_general_on(const Substitution &delta, const Substitution &rho,
                     const std::set<VarId> &vars) {
    if (vars.empty())
        return true;
    SymbolId tup = intern_symbol("_tup" + std::to_string(vars.size()),
                                 static_cast<uint32_t>(vars.size()));
    std::vector<Term> args;
    for (VarId v : vars)
        args.push_back(Term::var(v));
    Term tuple = Term::app(tup, false, std::move(args));
    return match(delta.apply(tuple), rho.apply(tuple)).has_value();
}

} // namespace

bool is_captured(const Term &t_prime, const Term &host_lhs,
                 const std::vector<Substitution> &deltas, const std::set<VarId> &adp_vars,
                 const AdpProblem &problem) {
    for (const NarrowingCandidate &cand : narrowing_substitutions(t_prime, host_lhs, problem)) {
        bool covered = false;
        for (const Substitution &delta : deltas)
            if (more_general_on(delta, cand.delta, adp_vars)) {
                covered = true;
                break;
            }
        if (!covered)
            return false;
    }
    return true;
}

// -------------------------------------------------------------- instantiation

TransformOutcome proc_instantiation(const AdpProblem &problem, size_t adp_index) {
    TransformOutcome out;
    const Adp &target = problem[adp_index];
    Ptrs np_rules = np(problem);
    Ptrs flat_rules = problem.flattened();
    Term target_sharp = annotate_root(target.lhs);

    std::vector<Adp> instantiated;
    for (size_t k = 0; k < problem.size(); ++k) {
        Adp pred = rename_adp(problem[k]);
        for (const auto &[p, r] : pred.rhs.entries()) {
            for (const auto &[pos, t] : annotated_subterms(r)) {
                if (t.sym() != target.lhs.sym())
                    continue;
                CapOptions opts;
                opts.protect_root = true;
                Term capped = cap(annotate_root(t), np_rules.defined(), opts);
                auto delta = unify(capped, target_sharp);
                if (!delta)
                    continue;
                if (!is_anf(delta->apply(pred.lhs), flat_rules) ||
                    !is_anf(delta->apply(target.lhs), flat_rules))
                    continue;
                append_unique(instantiated, canonical_variant(apply_subst(target, *delta)));
            }
        }
    }

    std::vector<Adp> adps;
    adps.reserve(problem.size() + instantiated.size());
    for (size_t i = 0; i < problem.size(); ++i) {
        if (i == adp_index)
            append_unique(adps, flatten(target));
        else
            adps.push_back(problem[i]);
    }
    for (const Adp &adp : instantiated)
        append_unique(adps, adp);
    out.ok = true;
    out.generated = instantiated.size();
    out.child = AdpProblem(std::move(adps), problem.classical());
    return out;
}

TransformOutcome proc_forward_instantiation(const AdpProblem &problem, size_t adp_index) {
    TransformOutcome out;
    const Adp &target = problem[adp_index];
    Ptrs flat_rules = problem.flattened();

    std::vector<Adp> instantiated;
    for (const auto &[p, r] : target.rhs.entries()) {
        for (const auto &[pos, t] : annotated_subterms(r)) {
            Term t_sharp = annotate_root(t);
            std::set<size_t> usable = usable_rules_closure(t_sharp, problem);

            // reversed usable rules; degenerate reversals force the most
            // conservative cap
            bool degenerate = false;
            std::vector<Rule> reversed;
            for (size_t u : usable) {
                const Adp &rule = problem[u];
                std::set<VarId> lhs_vars = vars_of(rule.lhs);
                for (const auto &[q, rr] : rule.rhs.entries()) {
                    Term flat_rhs = flatten(rr);
                    if (flat_rhs.is_var()) {
                        degenerate = true;
                        continue;
                    }
                    for (VarId v : lhs_vars)
                        if (!vars_of(flat_rhs).count(v))
                            degenerate = true;
                    reversed.push_back({flat_rhs, MultiDistribution({{Rat(1), rule.lhs}})});
                }
            }
            std::set<SymbolId> reversed_defined;
            if (!degenerate)
                for (const Rule &rule : reversed)
                    reversed_defined.insert(rule.lhs.sym());

            for (size_t k = 0; k < problem.size(); ++k) {
                if (problem[k].lhs.sym() != t.sym())
                    continue;
                Term succ_lhs = rename_fresh(problem[k].lhs);
                CapOptions opts;
                opts.protect_root = true;
                opts.cap_everything = degenerate;
                opts.freshen_vars = degenerate || !reversed.empty();
                Term capped = cap(annotate_root(succ_lhs), reversed_defined, opts);
                auto delta = unify(t_sharp, capped);
                if (!delta)
                    continue;
                if (!is_anf(delta->apply(target.lhs), flat_rules) ||
                    !is_anf(delta->apply(succ_lhs), flat_rules))
                    continue;
                append_unique(instantiated, canonical_variant(apply_subst(target, *delta)));
            }
        }
    }

    std::vector<Adp> adps;
    adps.reserve(problem.size() + instantiated.size());
    for (size_t i = 0; i < problem.size(); ++i) {
        if (i == adp_index)
            append_unique(adps, flatten(target));
        else
            adps.push_back(problem[i]);
    }
    for (const Adp &adp : instantiated)
        append_unique(adps, adp);
    out.ok = true;
    out.generated = instantiated.size();
    out.child = AdpProblem(std::move(adps), problem.classical());
    return out;
}

// ------------------------------------------------- rule overlap instantiation

TransformOutcome proc_rule_overlap_instantiation(const AdpProblem &problem, size_t adp_index,
                                                 size_t j, const Position &t_pos) {
    TransformOutcome out;
    const Adp &target = problem[adp_index];
    if (j >= target.rhs.size() || !valid_position(target.rhs.term(j), t_pos)) {
        out.error = "invalid subterm selector";
        return out;
    }
    Term picked = subterm_at(target.rhs.term(j), t_pos);
    if (picked.is_var() || !picked.annotated()) {
        out.error = "selected position is not annotated";
        return out;
    }
    Term t = flatten(picked);

    std::vector<NarrowingCandidate> cands = narrowing_substitutions(t, target.lhs, problem);
    std::vector<Substitution> deltas;
    deltas.reserve(cands.size());
    for (const NarrowingCandidate &c : cands)
        deltas.push_back(c.delta);

    std::set<VarId> adp_vars = vars_of(target.lhs);
    for (const auto &[p, r] : target.rhs.entries())
        for (VarId v : vars_of(r))
            adp_vars.insert(v);

    std::vector<Adp> generated;
    for (const Substitution &delta : deltas)
        append_unique(generated, canonical_variant(apply_subst(target, delta)));

    // residual: keep exactly the annotations of non-captured subterms
    std::vector<std::pair<Rat, Term>> residual_rhs;
    for (size_t i = 0; i < target.rhs.size(); ++i) {
        const Term &ri = target.rhs.term(i);
        std::set<Position> keep;
        for (const auto &[pos, sub] : annotated_subterms(ri))
            if (!is_captured(sub, target.lhs, deltas, adp_vars, problem))
                keep.insert(pos);
        residual_rhs.emplace_back(target.rhs.prob(i), annotate(ri, keep, problem.defined()));
    }
    Adp residual{target.lhs, MultiDistribution(std::move(residual_rhs)), target.flag};

    std::vector<Adp> adps;
    adps.reserve(problem.size() + generated.size());
    for (size_t i = 0; i < problem.size(); ++i) {
        if (i == adp_index)
            adps.push_back(residual);
        else
            adps.push_back(problem[i]);
    }
    for (const Adp &adp : generated)
        append_unique(adps, adp);
    out.ok = true;
    out.generated = generated.size() + 1;
    out.child = AdpProblem(std::move(adps), problem.classical());
    return out;
}

} // namespace adp
