#include "adp/oracle.hpp"

#include <cmath>
#include <map>
#include <random>
#include <vector>

namespace adp {

namespace {

struct Evaluator {
    const Ptrs &system;
    const SimConfig &cfg;
    std::mt19937_64 rng;
    uint64_t steps = 0;
    int64_t current_size = 0;
    bool censored = false;

    Evaluator(const Ptrs &system, const SimConfig &cfg, uint64_t trial)
        : system(system), cfg(cfg),
          rng(cfg.seed * 0x9e3779b97f4a7c15ull + trial * 0xbf58476d1ce4e5b9ull + 1) {}

    size_t pick_branch(const MultiDistribution &mu) {
        // exact inverse-CDF sampling against a uniform 64-bit draw
        Rat threshold(Int(rng()), Int(1) << 64);
        Rat cumulative = 0;
        for (size_t j = 0; j < mu.size(); ++j) {
            cumulative += mu.prob(j);
            if (threshold < cumulative)
                return j;
        }
        return mu.size() - 1;
    }

    // evaluates t to a normal form under leftmost-innermost evaluation;
    // result is partial when censored
    Term eval(Term t) {
        if (censored || t.is_var())
            return t;
        while (true) {
            if (t.is_var())
                return t;
            std::vector<Term> args;
            args.reserve(t.args().size());
            bool args_changed = false;
            for (const Term &a : t.args()) {
                Term v = eval(a);
                if (censored)
                    return t;
                if (v != a)
                    args_changed = true;
                args.push_back(std::move(v));
            }
            if (args_changed)
                t = Term::app(t.sym(), t.annotated(), std::move(args));

            // arguments are normal forms now, so any root match is innermost
            std::vector<std::pair<size_t, Substitution>> matches;
            for (size_t i = 0; i < system.rules().size(); ++i) {
                Substitution sigma;
                if (match_into(system.rules()[i].lhs, t, sigma)) {
                    matches.emplace_back(i, std::move(sigma));
                    if (cfg.rule_policy == RulePolicy::DeclarationOrder)
                        break;
                }
            }
            if (matches.empty())
                return t;
            size_t pick = 0;
            if (cfg.rule_policy == RulePolicy::UniformRandom && matches.size() > 1)
                pick = std::uniform_int_distribution<size_t>(0, matches.size() - 1)(rng);
            const Rule &rule = system.rules()[matches[pick].first];
            size_t branch = pick_branch(rule.rhs);
            Term next = matches[pick].second.apply(rule.rhs.term(branch));

            ++steps;
            current_size += int64_t(next.node_count()) - int64_t(t.node_count());
            if (steps >= cfg.step_cap || current_size > int64_t(cfg.size_cap)) {
                censored = true;
                return t;
            }
            t = std::move(next);
        }
    }
};

} // namespace

RunResult simulate_run(const Ptrs &system, const Term &start, const SimConfig &cfg,
                       uint64_t trial_index) {
    Evaluator ev(system, cfg, trial_index);
    Term flat = flatten(start);
    ev.current_size = int64_t(flat.node_count());
    ev.eval(flat);
    return {!ev.censored, ev.steps};
}

Estimate estimate_termination(const Ptrs &system, const Term &start, const SimConfig &cfg) {
    Estimate est;
    est.trials = cfg.trials;
    for (uint64_t trial = 0; trial < cfg.trials; ++trial)
        if (simulate_run(system, start, cfg, trial).terminated)
            ++est.terminated;
    est.point = Rat(Int(est.terminated), Int(est.trials));
    double n = double(est.trials);
    double phat = double(est.terminated) / n;
    double z = 1.959963984540054; // 95%
    double denom = 1.0 + z * z / n;
    double center = (phat + z * z / (2 * n)) / denom;
    double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom;
    est.lower = std::max(0.0, center - half);
    est.upper = std::min(1.0, center + half);
    return est;
}

namespace {

struct MassContext {
    const Ptrs &system;
    bool adversarial;
    uint64_t budget;
    std::map<std::pair<Term, unsigned>, Rat> memo;

    Rat mass(const Term &t, unsigned depth) {
        if (budget == 0)
            throw OracleError("explosion-guard: node budget exceeded");
        --budget;
        std::vector<Redex> redexes = innermost_redexes(t, system);
        if (redexes.empty())
            return 1;
        if (depth == 0)
            return 0;
        auto key = std::make_pair(t, depth);
        auto it = memo.find(key);
        if (it != memo.end())
            return it->second;

        Rat best;
        bool first = true;
        size_t limit = adversarial ? redexes.size() : 1;
        for (size_t r = 0; r < limit; ++r) {
            MultiDistribution mu = rewrite_innermost(t, redexes[r].pos, redexes[r].rule_index, system);
            Rat total = 0;
            for (const auto &[p, succ] : mu.entries())
                total += p * mass(succ, depth - 1);
            if (first || total < best) {
                best = total;
                first = false;
            }
        }
        memo.emplace(key, best);
        return best;
    }
};

} // namespace

Rat bounded_mass(const Ptrs &system, const Term &start, unsigned depth, bool adversarial,
                 uint64_t node_budget) {
    MassContext ctx{system, adversarial, node_budget, {}};
    return ctx.mass(flatten(start), depth);
}

} // namespace adp
