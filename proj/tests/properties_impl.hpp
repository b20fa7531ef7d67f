#pragma once

// Randomized property drivers shared by the property test suite and the
// acceptance binary. Everything is seeded and deterministic.

#include "adp/engine.hpp"
#include "adp/oracle.hpp"
#include "adp/processors.hpp"
#include "adp/transforms.hpp"
#include "helpers.hpp"

#include <random>
#include <sstream>

namespace adp::testing::props {

struct Report {
    std::string name;
    size_t cases = 0;
    size_t failures = 0;
    std::string first_failure;

    void fail(const std::string &message) {
        ++failures;
        if (first_failure.empty())
            first_failure = message;
    }
    bool ok() const { return failures == 0 && cases > 0; }
    std::string summary() const {
        std::ostringstream out;
        out << name << ": " << cases << " cases, " << failures << " failures";
        if (!first_failure.empty())
            out << " (first: " << first_failure << ")";
        return out.str();
    }
};

// ---------------------------------------------------------------- generators

struct Gen {
    std::mt19937 rng;
    SymbolId f2, g1, h1, a0, b0, c2, s1; // c2/s1 stay constructors, rest may be defined
    VarId x, y;

    explicit Gen(uint32_t seed)
        : rng(seed), f2(intern_symbol("pf", 2)), g1(intern_symbol("pg", 1)),
          h1(intern_symbol("ph", 1)), a0(intern_symbol("pa", 0)), b0(intern_symbol("pb", 0)),
          c2(intern_symbol("pc", 2)), s1(intern_symbol("ps", 1)), x(intern_var("x")),
          y(intern_var("y")) {}

    size_t pick(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng); }
    bool flip() { return pick(2) == 0; }

    Term term(unsigned depth, bool allow_vars = true) {
        if (depth == 0 || pick(4) == 0) {
            switch (pick(allow_vars ? 4 : 2)) {
            case 0: return Term::constant(a0);
            case 1: return Term::constant(b0);
            case 2: return Term::var(x);
            default: return Term::var(y);
            }
        }
        switch (pick(5)) {
        case 0: return Term::app(g1, {term(depth - 1, allow_vars)});
        case 1: return Term::app(h1, {term(depth - 1, allow_vars)});
        case 2: return Term::app(s1, {term(depth - 1, allow_vars)});
        case 3: return Term::app(c2, {term(depth - 1, allow_vars), term(depth - 1, allow_vars)});
        default:
            return Term::app(f2, {term(depth - 1, allow_vars), term(depth - 1, allow_vars)});
        }
    }

    Term term_from(unsigned depth, const std::vector<Term> &leaves) {
        if (depth == 0 || pick(4) == 0)
            return leaves[pick(leaves.size())];
        switch (pick(5)) {
        case 0: return Term::app(g1, {term_from(depth - 1, leaves)});
        case 1: return Term::app(h1, {term_from(depth - 1, leaves)});
        case 2: return Term::app(s1, {term_from(depth - 1, leaves)});
        case 3:
            return Term::app(c2, {term_from(depth - 1, leaves), term_from(depth - 1, leaves)});
        default:
            return Term::app(f2, {term_from(depth - 1, leaves), term_from(depth - 1, leaves)});
        }
    }

    // random PTRS with up to `max_rules` rules over the fixed signature
    Ptrs system(size_t max_rules) {
        std::vector<SymbolId> roots{f2, g1, h1, a0};
        std::vector<Rule> rules;
        size_t count = 1 + pick(max_rules);
        for (size_t i = 0; i < count && rules.size() < max_rules; ++i) {
            SymbolId root = roots[pick(roots.size())];
            uint32_t arity = symbol_info(root).arity;
            std::vector<Term> args;
            std::vector<Term> leaves;
            for (uint32_t k = 0; k < arity; ++k) {
                // shallow argument patterns: variables or constructor shapes
                switch (pick(5)) {
                case 0: args.push_back(Term::constant(a0)); break;
                case 1: args.push_back(Term::constant(b0)); break;
                case 2: args.push_back(Term::app(s1, {k == 0 ? Term::var(x) : Term::var(y)})); break;
                default: args.push_back(Term::var(k == 0 ? x : y)); break;
                }
                for (VarId v : vars_of(args.back()))
                    leaves.push_back(Term::var(v));
            }
            Term lhs = Term::app(root, false, args);
            if (leaves.empty()) {
                leaves.push_back(Term::constant(a0));
                leaves.push_back(Term::constant(b0));
            }
            std::vector<std::pair<Rat, Term>> entries;
            if (flip()) {
                entries.emplace_back(Rat(1), term_from(1 + pick(2), leaves));
            } else {
                entries.emplace_back(Rat(1, 2), term_from(1 + pick(2), leaves));
                entries.emplace_back(Rat(1, 2), term_from(1 + pick(2), leaves));
            }
            rules.push_back({lhs, MultiDistribution(std::move(entries))});
        }
        return Ptrs(std::move(rules));
    }

    // ground constructor instantiation pool
    std::vector<Term> ground_pool() {
        return {Term::constant(a0), Term::constant(b0), Term::app(s1, {Term::constant(a0)})};
    }
};

// -------------------------------------------------- suite 1: annotate/flatten

inline Report suite_annotate_roundtrip(size_t n) {
    Report report{"annotate/flatten round-trips"};
    Gen gen(101);
    std::set<SymbolId> defined{gen.f2, gen.g1, gen.h1};
    for (size_t i = 0; i < n; ++i) {
        ++report.cases;
        Term t = gen.term(3);
        std::vector<Position> candidates;
        for (const auto &[pos, sub] : annotated_subterms(annotate_all(t, defined)))
            candidates.push_back(pos);
        std::set<Position> phi;
        for (const Position &pos : candidates)
            if (gen.flip())
                phi.insert(pos);
        Term u = annotate(t, phi, defined);
        if (annotated_positions(u) != phi)
            report.fail("annotated_positions(annotate(t,phi)) != phi for " + t.str());
        if (flatten(u) != flatten(t))
            report.fail("flatten not preserved for " + t.str());
        Term v = annotate(u, {}, defined);
        if (v != flatten(t) || annotate(v, {}, defined) != v)
            report.fail("flatten not idempotent for " + t.str());
    }
    return report;
}

// --------------------------------------------- suite 2: unify vs brute force

inline Report suite_unify_vs_bruteforce(size_t n) {
    Report report{"mgu vs brute-force unifier"};
    Gen gen(202);
    std::vector<Term> pool = gen.ground_pool();
    SymbolId tup2 = intern_symbol("_tup2", 2);
    for (size_t i = 0; i < n; ++i) {
        ++report.cases;
        Term s = gen.term(3);
        Term t = gen.term(3);
        auto sigma = unify(s, t);
        if (sigma && (sigma->apply(s) != sigma->apply(t))) {
            report.fail("mgu does not unify " + s.str() + " and " + t.str());
            continue;
        }
        // enumerate ground substitutions over the pool
        std::vector<VarId> vars;
        for (VarId v : vars_of(s))
            vars.push_back(v);
        for (VarId v : vars_of(t))
            if (std::find(vars.begin(), vars.end(), v) == vars.end())
                vars.push_back(v);
        size_t combos = 1;
        for (size_t k = 0; k < vars.size(); ++k)
            combos *= pool.size();
        Term tuple = Term::app(tup2, {s, t});
        for (size_t mask = 0; mask < combos; ++mask) {
            Substitution rho;
            size_t rest = mask;
            for (VarId v : vars) {
                rho.bind(v, pool[rest % pool.size()]);
                rest /= pool.size();
            }
            if (rho.apply(s) != rho.apply(t))
                continue;
            if (!sigma) {
                report.fail("unify missed a unifier of " + s.str() + " and " + t.str());
                break;
            }
            // sigma must be more general than rho
            if (!match(sigma->apply(tuple), rho.apply(tuple))) {
                report.fail("mgu of " + s.str() + " and " + t.str() + " is not most general");
                break;
            }
        }
    }
    return report;
}

// ----------------------------------------- suite 3: DG edge over-approximation

inline Report suite_dg_overapprox(size_t n) {
    Report report{"dependency graph over-approximation"};
    Gen gen(303);
    std::vector<Term> pool = gen.ground_pool();
    for (size_t i = 0; i < n; ++i) {
        ++report.cases;
        Ptrs system = gen.system(3);
        AdpProblem p = canonical_adps(system);
        DependencyGraph graph = dependency_graph(p);
        Ptrs np_rules = np(p);
        Ptrs flat = p.flattened();

        for (size_t from = 0; from < p.size(); ++from) {
            for (const auto &[prob, r] : p[from].rhs.entries()) {
                for (const auto &[pos, t] : annotated_subterms(r)) {
                    for (size_t to = 0; to < p.size(); ++to) {
                        if (t.sym() != p[to].lhs.sym() || graph.has_edge(from, to))
                            continue;
                        // brute-force: some ground instantiation reaches the
                        // target lhs within 3 innermost non-root steps
                        std::vector<VarId> vars1;
                        for (VarId v : vars_of(p[from].lhs))
                            vars1.push_back(v);
                        std::vector<VarId> vars2;
                        for (VarId v : vars_of(p[to].lhs))
                            vars2.push_back(v);
                        size_t c1 = 1, c2 = 1;
                        for (size_t k = 0; k < vars1.size(); ++k)
                            c1 *= pool.size();
                        for (size_t k = 0; k < vars2.size(); ++k)
                            c2 *= pool.size();
                        bool missing_edge_hit = false;
                        for (size_t m1 = 0; m1 < c1 && !missing_edge_hit; ++m1) {
                            Substitution s1;
                            size_t rest = m1;
                            for (VarId v : vars1) {
                                s1.bind(v, pool[rest % pool.size()]);
                                rest /= pool.size();
                            }
                            if (!is_anf(s1.apply(p[from].lhs), flat))
                                continue;
                            std::set<Term> reached =
                                innermost_reachable(s1.apply(t), np_rules, 3, true);
                            for (size_t m2 = 0; m2 < c2 && !missing_edge_hit; ++m2) {
                                Substitution s2;
                                rest = m2;
                                for (VarId v : vars2) {
                                    s2.bind(v, pool[rest % pool.size()]);
                                    rest /= pool.size();
                                }
                                if (!is_anf(s2.apply(p[to].lhs), flat))
                                    continue;
                                if (reached.count(s2.apply(p[to].lhs)))
                                    missing_edge_hit = true;
                            }
                        }
                        if (missing_edge_hit)
                            report.fail("missing DG edge " + std::to_string(from) + "->" +
                                        std::to_string(to) + " in\n" + p.str());
                    }
                }
            }
        }
    }
    return report;
}

// -------------------------------- suite 4: processors preserve the flat PTRS

inline Report suite_flatten_preservation(size_t n) {
    Report report{"processor children preserve flatten(P)"};
    Gen gen(404);
    for (size_t i = 0; i < n; ++i) {
        ++report.cases;
        AdpProblem p = canonical_adps(gen.system(3));
        auto check_children = [&](const char *which, const std::vector<AdpProblem> &children) {
            for (const AdpProblem &child : children) {
                if (child.size() != p.size()) {
                    report.fail(std::string(which) + " changed the rule count");
                    return;
                }
                for (size_t k = 0; k < p.size(); ++k) {
                    // only annotations and flags may change
                    Adp lhs = flatten(child[k]);
                    Adp rhs = flatten(p[k]);
                    lhs.flag = rhs.flag = true;
                    if (!alpha_equal(lhs, rhs))
                        report.fail(std::string(which) + " changed rule " + std::to_string(k));
                }
            }
        };
        check_children("dependency_graph", proc_dependency_graph(p).children);
        check_children("usable_terms", proc_usable_terms(p).children);
        check_children("usable_rules", proc_usable_rules(p).children);
        if (auto pol = search_interpretation(p, {2, false, 40000})) {
            RpResult rp = proc_reduction_pair(p, *pol);
            if (rp.ok)
                check_children("reduction_pair", {rp.child});
        }
    }
    return report;
}

// --------------------------------------- suite 5: distributions and adp_steps

inline Report suite_distributions_and_steps(size_t n) {
    Report report{"distribution sums and step projection"};
    Gen gen(505);
    for (size_t i = 0; i < n; ++i) {
        ++report.cases;
        Ptrs system = gen.system(3);
        AdpProblem p = canonical_adps(system);
        Ptrs flat = p.flattened();
        Rat one(1);
        for (const Adp &adp : p.adps()) {
            Rat sum = 0;
            for (const auto &[prob, r] : adp.rhs.entries())
                sum += prob;
            if (sum != one)
                report.fail("canonical distribution sums to " + to_string(sum));
        }
        Term s = annotate_all(gen.term(3, false), p.defined());
        for (const AdpStep &step : adp_steps(s, p)) {
            Rat sum = 0;
            for (const auto &[prob, succ] : step.successors.entries())
                sum += prob;
            if (sum != one)
                report.fail("step distribution sums to " + to_string(sum));
            // case coherence
            bool annotated = subterm_at(s, step.pos).annotated();
            bool flag = p[step.adp_index].flag;
            StepCase expect = annotated ? (flag ? StepCase::PR : StepCase::P)
                                        : (flag ? StepCase::R : StepCase::IRR);
            if (step.step_case != expect)
                report.fail("case mismatch at " + to_string(step.pos));
            // projection: the flattened step is a valid innermost PTRS step
            MultiDistribution projected =
                rewrite_innermost(flatten(s), step.pos, step.adp_index, flat);
            if (projected.size() != step.successors.size()) {
                report.fail("projection arity mismatch");
                continue;
            }
            for (size_t j = 0; j < projected.size(); ++j)
                if (flatten(step.successors.term(j)) != projected.term(j) ||
                    projected.prob(j) != step.successors.prob(j))
                    report.fail("projection mismatch at branch " + std::to_string(j));
            // no annotations inside substitution images
            for (const auto &[v, img] : step.sigma.entries())
                if (has_annotation(img))
                    report.fail("annotated substitution image");
        }
    }
    return report;
}

// ------------------------------------------------------ suite 6: cap property

inline Report suite_cap_property(size_t n) {
    Report report{"Cap abstraction covers innermost reducts"};
    Gen gen(606);
    std::vector<Term> pool = gen.ground_pool();
    for (size_t i = 0; i < n; ++i) {
        ++report.cases;
        Ptrs system = gen.system(3);
        AdpProblem p = canonical_adps(system);
        Ptrs np_rules = np(p);
        Term t = gen.term(2);
        Term capped = cap(t, np_rules.defined());
        // substitution images must be normal forms, as in every use of the
        // abstraction (they stand for arguments of terms in argument normal
        // form)
        std::vector<Term> nf_pool;
        for (const Term &cand : pool)
            if (is_nf(cand, np_rules))
                nf_pool.push_back(cand);
        if (nf_pool.empty())
            nf_pool.push_back(Term::var(gen.y));
        Substitution sigma;
        for (VarId v : vars_of(t))
            sigma.bind(v, nf_pool[gen.pick(nf_pool.size())]);
        for (const Term &u : innermost_reachable(sigma.apply(t), np_rules, 3))
            if (!match(capped, u))
                report.fail("cap(" + t.str() + ") does not match reduct " + u.str());
    }
    return report;
}

// ---------------------------------------- suite 7: polynomial check soundness

inline Report suite_polynomial_checks(size_t n) {
    Report report{"absolute positiveness vs numeric evaluation"};
    Gen gen(707);
    VarId x = intern_var("x"), y = intern_var("y");
    auto random_poly = [&]() {
        Poly p;
        for (int k = 0; k < 4; ++k) {
            Mono m;
            if (gen.flip())
                m.push_back(x);
            if (gen.flip())
                m.push_back(y);
            std::sort(m.begin(), m.end());
            int coeff = int(gen.pick(7)) - 3;
            p = p + [&] {
                Poly q;
                if (coeff == 0)
                    return q;
                Poly unit = Poly::constant(Rat(coeff));
                for (VarId v : m)
                    unit = unit * Poly::variable(v);
                return unit;
            }();
        }
        return p;
    };
    std::mt19937 eval_rng(808);
    for (size_t i = 0; i < n; ++i) {
        ++report.cases;
        Poly p = random_poly();
        Poly q = random_poly();
        bool geq = check_geq(p, q);
        bool gt = check_gt(p, q);
        for (int k = 0; k < 200; ++k) {
            std::map<VarId, Rat> assignment{
                {x, Rat(int(eval_rng() % 6))}, {y, Rat(int(eval_rng() % 6))}};
            Rat pv = p.eval(assignment), qv = q.eval(assignment);
            if (geq && pv < qv)
                report.fail("check_geq unsound for " + p.str() + " vs " + q.str());
            if (gt && pv <= qv)
                report.fail("check_gt unsound for " + p.str() + " vs " + q.str());
        }
    }
    return report;
}

// ------------------------------------------- suite 8: proof re-verification

inline Report suite_proof_reverification() {
    Report report{"proof re-verification on the YES corpus"};
    std::vector<std::pair<std::string, Ptrs>> corpus;
    corpus.emplace_back("rw", sys_rw().R());
    corpus.emplace_back("branch2", sys_branch2().R());
    corpus.emplace_back("ffg", sys_ffg().R());
    corpus.emplace_back("incpl", sys_incpl().R());
    for (auto &[name, system] : corpus) {
        ++report.cases;
        Config cfg;
        cfg.timeout_seconds = 60;
        Verdict v = prove(system, cfg);
        if (!v.yes) {
            report.fail(name + " did not prove");
            continue;
        }
        std::string why;
        if (!reverify(v.root, &why))
            report.fail(name + " re-verification: " + why);
    }
    return report;
}

} // namespace adp::testing::props
