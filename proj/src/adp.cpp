#include "adp/adp.hpp"

#include <algorithm>

namespace adp {

bool Adp::has_annotations() const {
    for (const auto &[p, r] : rhs.entries())
        if (has_annotation(r))
            return true;
    return false;
}

std::string Adp::str() const {
    return lhs.str() + " -> " + rhs.str() + (flag ? "^true" : "^false");
}

AdpProblem::AdpProblem(std::vector<Adp> adps, bool classical)
    : adps_(std::move(adps)), classical_(classical) {
    for (const Adp &adp : adps_) {
        if (adp.lhs.is_var())
            throw TermError("ADP left-hand side is a variable");
        if (has_annotation(adp.lhs))
            throw TermError("ADP left-hand side carries annotations");
        defined_.insert(adp.lhs.sym());
    }
}

Ptrs AdpProblem::flattened() const {
    std::vector<Rule> rules;
    rules.reserve(adps_.size());
    for (const Adp &adp : adps_)
        rules.push_back({adp.lhs, adp.rhs.map([](const Term &t) { return flatten(t); })});
    return Ptrs(std::move(rules));
}

std::string AdpProblem::str() const {
    std::string out;
    for (size_t i = 0; i < adps_.size(); ++i)
        out += "(" + std::to_string(i) + ") " + adps_[i].str() + "\n";
    return out;
}

Adp flatten(const Adp &adp) {
    return {adp.lhs, adp.rhs.map([](const Term &t) { return flatten(t); }), adp.flag};
}

AdpProblem canonical_adps(const Ptrs &system) {
    const std::set<SymbolId> &defined = system.defined();
    std::vector<Adp> adps;
    adps.reserve(system.rules().size());
    for (const Rule &rule : system.rules())
        adps.push_back({rule.lhs,
                        rule.rhs.map([&](const Term &t) { return annotate_all(t, defined); }),
                        true});
    return AdpProblem(std::move(adps));
}

Ptrs np(const AdpProblem &problem) {
    std::vector<Rule> rules;
    for (const Adp &adp : problem.adps()) {
        if (!adp.flag)
            continue;
        for (const auto &[p, r] : adp.rhs.entries())
            rules.push_back({adp.lhs, MultiDistribution({{Rat(1), flatten(r)}})});
    }
    return Ptrs(std::move(rules));
}

std::vector<std::pair<Term, Term>> dp(const AdpProblem &problem) {
    std::vector<std::pair<Term, Term>> pairs;
    for (const Adp &adp : problem.adps()) {
        if (!adp.rhs.singleton())
            throw TermError("dp(P) requires trivial distributions, got " + adp.rhs.str());
        Term lhs_sharp = annotate_root(adp.lhs);
        for (const auto &[pos, t] : annotated_subterms(adp.rhs.term(0)))
            pairs.emplace_back(lhs_sharp, annotate_root(t));
    }
    return pairs;
}

bool is_solved(const AdpProblem &problem) {
    for (const Adp &adp : problem.adps())
        if (adp.has_annotations())
            return false;
    return true;
}

std::string to_string(StepCase c) {
    switch (c) {
    case StepCase::PR: return "pr";
    case StepCase::P: return "p";
    case StepCase::R: return "r";
    case StepCase::IRR: return "irr";
    }
    return "?";
}

namespace {

void collect_defined_positions(const Term &t, const std::set<SymbolId> &defined, Position &prefix,
                               std::vector<Position> &out) {
    if (t.is_var())
        return;
    if (defined.count(t.sym()))
        out.push_back(prefix);
    for (uint32_t i = 0; i < t.args().size(); ++i) {
        prefix.push_back(i + 1);
        collect_defined_positions(t.args()[i], defined, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

namespace {

Term canonical_rec(const Term &t, std::map<VarId, VarId> &mapping) {
    if (t.is_var()) {
        auto it = mapping.find(t.var());
        if (it == mapping.end())
            it = mapping.emplace(t.var(), intern_var("_c" + std::to_string(mapping.size()))).first;
        return Term::var(it->second);
    }
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term &a : t.args())
        args.push_back(canonical_rec(a, mapping));
    return Term::app(t.sym(), t.annotated(), std::move(args));
}

} // namespace

Adp canonical_variant(const Adp &adp) {
    std::map<VarId, VarId> mapping;
    Term lhs = canonical_rec(adp.lhs, mapping);
    std::vector<std::pair<Rat, Term>> rhs;
    for (const auto &[p, r] : adp.rhs.entries())
        rhs.emplace_back(p, canonical_rec(r, mapping));
    return {lhs, MultiDistribution(std::move(rhs)), adp.flag};
}

bool alpha_equal(const Adp &a, const Adp &b) {
    return canonical_variant(a) == canonical_variant(b);
}

std::string problem_key(const AdpProblem &problem) {
    std::vector<std::string> keys;
    keys.reserve(problem.size());
    for (const Adp &adp : problem.adps())
        keys.push_back(canonical_variant(adp).str());
    std::sort(keys.begin(), keys.end());
    std::string out = problem.classical() ? "c|" : "p|";
    for (const std::string &k : keys)
        out += k + ";";
    return out;
}

std::string flattened_problem_key(const AdpProblem &problem) {
    std::vector<std::string> keys;
    keys.reserve(problem.size());
    for (const Adp &adp : problem.adps()) {
        Adp flat = flatten(adp);
        flat.flag = true;
        keys.push_back(canonical_variant(flat).str());
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::string out;
    for (const std::string &k : keys)
        out += k + ";";
    return out;
}

std::vector<AdpStep> adp_steps(const Term &s, const AdpProblem &problem) {
    Ptrs flat = problem.flattened();
    std::vector<Position> candidates;
    Position prefix;
    collect_defined_positions(s, problem.defined(), prefix, candidates);

    std::vector<AdpStep> out;
    for (const Position &pos : candidates) {
        Term sub = subterm_at(s, pos);
        bool pos_annotated = sub.annotated();
        Term redex = flatten(sub);
        if (!is_anf(redex, flat))
            continue;
        for (size_t i = 0; i < problem.size(); ++i) {
            const Adp &adp = problem[i];
            Substitution sigma;
            if (!match_into(adp.lhs, redex, sigma))
                continue;
            StepCase step_case = pos_annotated ? (adp.flag ? StepCase::PR : StepCase::P)
                                               : (adp.flag ? StepCase::R : StepCase::IRR);
            std::vector<std::pair<Rat, Term>> succ;
            succ.reserve(adp.rhs.size());
            for (const auto &[p, r] : adp.rhs.entries()) {
                Term inserted = pos_annotated ? sigma.apply(r) : sigma.apply(flatten(r));
                Term result = replace_at(s, pos, inserted);
                if (!adp.flag)
                    result = strip_above(result, pos);
                succ.emplace_back(p, result);
            }
            out.push_back({pos, i, std::move(sigma), step_case, MultiDistribution(std::move(succ))});
        }
    }
    return out;
}

} // namespace adp
