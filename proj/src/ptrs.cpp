#include "adp/ptrs.hpp"

#include <functional>

namespace adp {

MultiDistribution::MultiDistribution(std::vector<std::pair<Rat, Term>> entries)
    : entries_(std::move(entries)) {
    if (entries_.empty())
        throw TermError("empty multi-distribution");
    Rat sum = 0;
    for (const auto &[p, t] : entries_) {
        if (p <= 0 || p > 1)
            throw TermError("probability out of (0,1]: " + to_string(p));
        sum += p;
    }
    if (sum != 1)
        throw TermError("multi-distribution sums to " + to_string(sum) + ", expected 1");
}

MultiDistribution MultiDistribution::map(const std::function<Term(const Term &)> &f) const {
    std::vector<std::pair<Rat, Term>> out;
    out.reserve(entries_.size());
    for (const auto &[p, t] : entries_)
        out.emplace_back(p, f(t));
    return MultiDistribution(std::move(out));
}

std::string MultiDistribution::str() const {
    std::string out = "{";
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (i)
            out += ", ";
        out += to_string(entries_[i].first) + ":" + entries_[i].second.str();
    }
    return out + "}";
}

std::string Rule::str() const {
    return lhs.str() + " -> " + rhs.str();
}

Ptrs::Ptrs(std::vector<Rule> rules) : rules_(std::move(rules)) {
    for (const Rule &rule : rules_) {
        if (rule.lhs.is_var())
            throw TermError("rule left-hand side is a variable");
        std::set<VarId> lhs_vars = vars_of(rule.lhs);
        for (const auto &[p, r] : rule.rhs.entries())
            for (VarId v : vars_of(r))
                if (!lhs_vars.count(v))
                    throw TermError("variable " + var_name(v) + " occurs only on a right-hand side");
        defined_.insert(rule.lhs.sym());
    }
}

std::string Ptrs::str() const {
    std::string out;
    for (const Rule &rule : rules_)
        out += rule.str() + "\n";
    return out;
}

std::set<SymbolId> defined_symbols(const Ptrs &system) {
    return system.defined();
}

namespace {

bool some_rule_matches_root(const Term &t, const Ptrs &system) {
    if (t.is_var())
        return false;
    for (const Rule &rule : system.rules()) {
        Substitution sigma;
        if (match_into(rule.lhs, t, sigma))
            return true;
    }
    return false;
}

bool is_nf_flat(const Term &t, const Ptrs &system) {
    if (t.is_var())
        return true;
    if (some_rule_matches_root(t, system))
        return false;
    for (const Term &a : t.args())
        if (!is_nf_flat(a, system))
            return false;
    return true;
}

} // namespace

bool is_nf(const Term &t, const Ptrs &system) {
    return is_nf_flat(flatten(t), system);
}

bool is_anf(const Term &t, const Ptrs &system) {
    Term flat = flatten(t);
    if (flat.is_var())
        return true;
    for (const Term &a : flat.args())
        if (!is_nf_flat(a, system))
            return false;
    return true;
}

namespace {

void collect_redexes(const Term &flat, const Ptrs &system, Position &prefix,
                     std::vector<Redex> &out) {
    if (flat.is_var())
        return;
    bool args_nf = true;
    for (const Term &a : flat.args())
        if (!is_nf_flat(a, system))
            args_nf = false;
    if (args_nf) {
        for (size_t i = 0; i < system.rules().size(); ++i) {
            Substitution sigma;
            if (match_into(system.rules()[i].lhs, flat, sigma))
                out.push_back({prefix, i, std::move(sigma)});
        }
    }
    for (uint32_t i = 0; i < flat.args().size(); ++i) {
        prefix.push_back(i + 1);
        collect_redexes(flat.args()[i], system, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<Redex> innermost_redexes(const Term &t, const Ptrs &system) {
    std::vector<Redex> out;
    Position prefix;
    collect_redexes(flatten(t), system, prefix, out);
    return out;
}

MultiDistribution rewrite_innermost(const Term &t, const Position &pos, size_t rule_index,
                                    const Ptrs &system) {
    Term flat = flatten(t);
    if (rule_index >= system.rules().size())
        throw TermError("rule index out of range");
    const Rule &rule = system.rules()[rule_index];
    Term sub = subterm_at(flat, pos);
    Substitution sigma;
    if (!match_into(rule.lhs, sub, sigma) || !is_anf(sub, system))
        throw TermError("not an innermost redex: " + sub.str() + " at " + to_string(pos));
    std::vector<std::pair<Rat, Term>> out;
    out.reserve(rule.rhs.size());
    for (const auto &[p, r] : rule.rhs.entries())
        out.emplace_back(p, replace_at(flat, pos, sigma.apply(r)));
    return MultiDistribution(std::move(out));
}

std::set<Term> innermost_reachable(const Term &t, const Ptrs &system, unsigned steps,
                                   bool forbid_root) {
    std::set<Term> seen{flatten(t)};
    std::vector<Term> frontier{flatten(t)};
    for (unsigned depth = 0; depth < steps && !frontier.empty(); ++depth) {
        std::vector<Term> next;
        for (const Term &cur : frontier) {
            for (const Redex &rdx : innermost_redexes(cur, system)) {
                if (forbid_root && rdx.pos.empty())
                    continue;
                MultiDistribution mu = rewrite_innermost(cur, rdx.pos, rdx.rule_index, system);
                for (const auto &[p, succ] : mu.entries())
                    if (seen.insert(succ).second)
                        next.push_back(succ);
            }
        }
        frontier = std::move(next);
    }
    return seen;
}

} // namespace adp
