#include "adp/polysolve.hpp"

#include <algorithm>

namespace adp {

// ---------------------------------------------------------------- Poly

Poly Poly::constant(const Rat &c) {
    Poly p;
    p.add_coeff({}, c);
    return p;
}

Poly Poly::variable(VarId v) {
    Poly p;
    p.add_coeff({v}, 1);
    return p;
}

void Poly::add_coeff(const Mono &m, const Rat &c) {
    if (c == 0)
        return;
    auto [it, inserted] = coeffs_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            coeffs_.erase(it);
    }
}

Poly Poly::operator+(const Poly &other) const {
    Poly out = *this;
    for (const auto &[m, c] : other.coeffs_)
        out.add_coeff(m, c);
    return out;
}

Poly Poly::operator-(const Poly &other) const {
    Poly out = *this;
    for (const auto &[m, c] : other.coeffs_)
        out.add_coeff(m, -c);
    return out;
}

namespace {
Mono merge_monos(const Mono &a, const Mono &b) {
    Mono out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}
} // namespace

Poly Poly::operator*(const Poly &other) const {
    Poly out;
    for (const auto &[m1, c1] : coeffs_)
        for (const auto &[m2, c2] : other.coeffs_)
            out.add_coeff(merge_monos(m1, m2), c1 * c2);
    return out;
}

Poly Poly::scaled(const Rat &c) const {
    Poly out;
    for (const auto &[m, cc] : coeffs_)
        out.add_coeff(m, cc * c);
    return out;
}

Rat Poly::coeff(const Mono &m) const {
    auto it = coeffs_.find(m);
    return it == coeffs_.end() ? Rat(0) : it->second;
}

Rat Poly::eval(const std::map<VarId, Rat> &assignment) const {
    Rat total = 0;
    for (const auto &[m, c] : coeffs_) {
        Rat prod = c;
        for (VarId v : m) {
            auto it = assignment.find(v);
            prod *= (it == assignment.end() ? Rat(0) : it->second);
        }
        total += prod;
    }
    return total;
}

std::string Poly::str() const {
    if (coeffs_.empty())
        return "0";
    std::string out;
    for (const auto &[m, c] : coeffs_) {
        if (!out.empty())
            out += " + ";
        if (m.empty()) {
            out += to_string(c);
            continue;
        }
        if (c != 1)
            out += to_string(c) + "*";
        for (size_t i = 0; i < m.size(); ++i) {
            if (i)
                out += "*";
            out += var_name(m[i]);
        }
    }
    return out;
}

// ---------------------------------------------------------------- templates

std::string SymPoly::str(uint32_t arity) const {
    if (coeffs.empty())
        return "0";
    std::string out;
    for (const auto &[mask, c] : coeffs) {
        if (!out.empty())
            out += " + ";
        if (mask == 0) {
            out += to_string(c);
            continue;
        }
        if (c != 1)
            out += to_string(c) + "*";
        bool first = true;
        for (uint32_t i = 0; i < arity; ++i) {
            if (!(mask & (1u << i)))
                continue;
            if (!first)
                out += "*";
            first = false;
            out += "x" + std::to_string(i + 1);
        }
    }
    return out;
}

const SymPoly *Interpretation::find(SymbolId sym, bool annotated) const {
    auto it = entries.find({sym, annotated});
    return it == entries.end() ? nullptr : &it->second;
}

std::string Interpretation::str() const {
    std::string out;
    for (const auto &[key, poly] : entries) {
        if (!out.empty())
            out += ", ";
        out += "Pol(" + symbol_info(key.first).name + (key.second ? "#" : "") +
               ") = " + poly.str(symbol_info(key.first).arity);
    }
    return out;
}

Poly interpret(const Term &t, const Interpretation &pol) {
    if (t.is_var())
        return Poly::variable(t.var());
    const SymPoly *tmpl = pol.find(t.sym(), t.annotated());
    if (!tmpl)
        throw PolyError("interpretation missing for symbol " + symbol_info(t.sym()).name +
                        (t.annotated() ? "#" : ""));
    std::vector<Poly> arg_polys;
    arg_polys.reserve(t.args().size());
    for (const Term &a : t.args())
        arg_polys.push_back(interpret(a, pol));
    Poly out;
    for (const auto &[mask, c] : tmpl->coeffs) {
        Poly prod = Poly::constant(c);
        for (uint32_t i = 0; i < t.args().size(); ++i)
            if (mask & (1u << i))
                prod = prod * arg_polys[i];
        out = out + prod;
    }
    return out;
}

Poly annotated_subterm_sum(const Term &r, const Interpretation &pol) {
    Poly sum;
    for (const auto &[pos, t] : annotated_subterms(r))
        sum = sum + interpret(annotate_root(t), pol);
    return sum;
}

Poly expected_value(const MultiDistribution &mu, const Interpretation &pol, ExpectationMode mode) {
    Poly sum;
    for (const auto &[p, r] : mu.entries()) {
        Poly piece = mode == ExpectationMode::Plain ? interpret(flatten(r), pol)
                                                    : annotated_subterm_sum(r, pol);
        sum = sum + piece.scaled(p);
    }
    return sum;
}

bool check_geq(const Poly &p, const Poly &q) {
    Poly diff = p - q;
    for (const auto &[m, c] : diff.coeffs())
        if (c < 0)
            return false;
    return true;
}

bool check_gt(const Poly &p, const Poly &q) {
    return check_geq(p, q) && (p - q).coeff({}) >= 1;
}

// ------------------------------------------------------- reduction-pair check

RpCheck check_reduction_pair(const AdpProblem &problem, const Interpretation &pol) {
    RpCheck out;
    for (size_t i = 0; i < problem.size(); ++i) {
        const Adp &adp = problem[i];
        if (adp.flag) {
            Poly lhs = interpret(adp.lhs, pol);
            Poly rhs = expected_value(adp.rhs, pol, ExpectationMode::Plain);
            if (!check_geq(lhs, rhs)) {
                out.violation = "condition (1) fails for ADP " + std::to_string(i);
                return out;
            }
        }
        Poly lhs_sharp = interpret(annotate_root(adp.lhs), pol);
        Poly rhs_sum = expected_value(adp.rhs, pol, ExpectationMode::AnnotatedSum);
        if (!check_geq(lhs_sharp, rhs_sum)) {
            out.violation = "condition (2) fails for ADP " + std::to_string(i);
            return out;
        }
    }
    out.conditions_ok = true;
    for (size_t i = 0; i < problem.size(); ++i) {
        const Adp &adp = problem[i];
        Poly lhs_sharp = interpret(annotate_root(adp.lhs), pol);
        Poly lhs_plain = interpret(adp.lhs, pol);
        for (size_t j = 0; j < adp.rhs.size(); ++j) {
            if (!check_gt(lhs_sharp, annotated_subterm_sum(adp.rhs.term(j), pol)))
                continue;
            if (adp.flag && !check_geq(lhs_plain, interpret(flatten(adp.rhs.term(j)), pol)))
                continue;
            out.strict_set.push_back(i);
            break;
        }
    }
    if (out.strict_set.empty())
        out.violation = "empty strict set";
    return out;
}

// ---------------------------------------------------------------- search

namespace {

// Monomial over unknown coefficient ids; repeats encode powers (composition
// of templates can square an unknown).
using UMono = std::vector<int>;

struct UPoly {
    std::map<UMono, Rat> coeffs;

    void add(const UMono &m, const Rat &c) {
        if (c == 0)
            return;
        auto [it, inserted] = coeffs.emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0)
                coeffs.erase(it);
        }
    }
    UPoly operator+(const UPoly &o) const {
        UPoly out = *this;
        for (const auto &[m, c] : o.coeffs)
            out.add(m, c);
        return out;
    }
    UPoly operator-(const UPoly &o) const {
        UPoly out = *this;
        for (const auto &[m, c] : o.coeffs)
            out.add(m, -c);
        return out;
    }
    UPoly operator*(const UPoly &o) const {
        UPoly out;
        for (const auto &[m1, c1] : coeffs)
            for (const auto &[m2, c2] : o.coeffs) {
                UMono m;
                m.reserve(m1.size() + m2.size());
                std::merge(m1.begin(), m1.end(), m2.begin(), m2.end(), std::back_inserter(m));
                out.add(m, c1 * c2);
            }
        return out;
    }
    UPoly scaled(const Rat &c) const {
        UPoly out;
        for (const auto &[m, cc] : coeffs)
            out.add(m, cc * c);
        return out;
    }
    static UPoly constant(const Rat &c) {
        UPoly p;
        p.add({}, c);
        return p;
    }
    static UPoly unknown(int id) {
        UPoly p;
        p.add({id}, 1);
        return p;
    }
};

// Symbolic polynomial over term variables whose coefficients are UPolys.
struct SPoly {
    std::map<Mono, UPoly> coeffs;

    void add(const Mono &m, const UPoly &u) {
        auto [it, inserted] = coeffs.emplace(m, u);
        if (!inserted)
            it->second = it->second + u;
    }
    SPoly operator+(const SPoly &o) const {
        SPoly out = *this;
        for (const auto &[m, u] : o.coeffs)
            out.add(m, u);
        return out;
    }
    SPoly operator-(const SPoly &o) const {
        SPoly out = *this;
        for (const auto &[m, u] : o.coeffs)
            out.add(m, u.scaled(-1));
        return out;
    }
    SPoly operator*(const SPoly &o) const {
        SPoly out;
        for (const auto &[m1, u1] : coeffs)
            for (const auto &[m2, u2] : o.coeffs)
                out.add(merge_monos(m1, m2), u1 * u2);
        return out;
    }
    SPoly scaled(const Rat &c) const {
        SPoly out;
        for (const auto &[m, u] : coeffs)
            out.add(m, u.scaled(c));
        return out;
    }
};

struct TemplateSlot {
    SymbolId sym;
    bool annotated;
    uint32_t mask;
};

struct SymbolicContext {
    std::map<std::pair<SymbolId, bool>, std::vector<std::pair<uint32_t, int>>> templates;
    std::vector<TemplateSlot> slots;
    unsigned max_coeff = 2;

    SPoly interpret(const Term &t) const {
        if (t.is_var()) {
            SPoly p;
            p.add({t.var()}, UPoly::constant(1));
            return p;
        }
        auto it = templates.find({t.sym(), t.annotated()});
        if (it == templates.end())
            throw PolyError("no template for " + symbol_info(t.sym()).name);
        std::vector<SPoly> arg_polys;
        arg_polys.reserve(t.args().size());
        for (const Term &a : t.args())
            arg_polys.push_back(interpret(a));
        SPoly out;
        for (const auto &[mask, id] : it->second) {
            SPoly prod;
            prod.add({}, UPoly::unknown(id));
            for (uint32_t i = 0; i < t.args().size(); ++i)
                if (mask & (1u << i))
                    prod = prod * arg_polys[i];
            out = out + prod;
        }
        return out;
    }

    SPoly annotated_sum(const Term &r) const {
        SPoly sum;
        for (const auto &[pos, t] : annotated_subterms(r))
            sum = sum + interpret(annotate_root(t));
        return sum;
    }

    SPoly expected(const MultiDistribution &mu, ExpectationMode mode) const {
        SPoly sum;
        for (const auto &[p, r] : mu.entries()) {
            SPoly piece = mode == ExpectationMode::Plain ? interpret(flatten(r)) : annotated_sum(r);
            sum = sum + piece.scaled(p);
        }
        return sum;
    }
};

// expr >= lower must hold; the expression has integer coefficients after
// LCD clearing.
struct Constraint {
    UPoly expr;
    Rat lower;
};

// geq as absolute positiveness: every term-variable monomial of (lhs - rhs)
// must be nonnegative; strict additionally bounds the constant monomial away
// from zero.
void push_geq(std::vector<Constraint> &out, const SPoly &lhs, const SPoly &rhs) {
    SPoly diff = lhs - rhs;
    for (const auto &[m, u] : diff.coeffs) {
        if (u.coeffs.empty())
            continue;
        out.push_back({u, Rat(0)});
    }
}

void push_gt(std::vector<Constraint> &out, const SPoly &lhs, const SPoly &rhs) {
    SPoly diff = lhs - rhs;
    bool constant_seen = false;
    for (const auto &[m, u] : diff.coeffs) {
        if (m.empty()) {
            out.push_back({u, Rat(1)});
            constant_seen = true;
        } else if (!u.coeffs.empty()) {
            out.push_back({u, Rat(0)});
        }
    }
    if (!constant_seen)
        out.push_back({UPoly(), Rat(1)}); // constant difference is 0: unsatisfiable
}

// integer form of a constraint, scaled by the LCD of its coefficients
struct IntConstraint {
    std::vector<std::pair<UMono, long long>> terms;
    long long lower = 0;
};

std::optional<IntConstraint> freeze(const Constraint &c) {
    Int lcd = 1;
    for (const auto &[m, coeff] : c.expr.coeffs)
        lcd = boost::multiprecision::lcm(lcd, denominator(coeff));
    lcd = boost::multiprecision::lcm(lcd, denominator(c.lower));
    IntConstraint out;
    bool maybe_false = false;
    for (const auto &[m, coeff] : c.expr.coeffs) {
        Rat scaled = coeff * lcd;
        out.terms.emplace_back(m, scaled.convert_to<long long>());
        if (out.terms.back().second < 0)
            maybe_false = true;
    }
    out.lower = Rat(c.lower * lcd).convert_to<long long>();
    if (out.lower > 0)
        maybe_false = true;
    if (!maybe_false)
        return std::nullopt; // nonnegative terms against a bound <= 0: always true
    return out;
}

long long upper_bound(const IntConstraint &c, const std::vector<int> &assignment,
                      unsigned max_coeff) {
    long long hi = 0;
    for (const auto &[m, coeff] : c.terms) {
        long long value = 1;
        for (int id : m) {
            if (assignment[id] >= 0)
                value *= assignment[id];
            else
                value *= coeff >= 0 ? (long long)(max_coeff) : 0;
        }
        hi += coeff * value;
    }
    return hi;
}

struct Solver {
    std::vector<IntConstraint> constraints;
    std::vector<int> order; // unknowns in assignment order
    unsigned max_coeff;
    uint64_t budget;
    std::vector<std::vector<size_t>> touching; // unknown id -> constraint indices

    void index(size_t unknown_count) {
        touching.assign(unknown_count, {});
        for (size_t c = 0; c < constraints.size(); ++c) {
            std::set<int> ids;
            for (const auto &[m, coeff] : constraints[c].terms)
                for (int id : m)
                    ids.insert(id);
            for (int id : ids)
                touching[size_t(id)].push_back(c);
        }
    }

    bool feasible(size_t c, const std::vector<int> &assignment) const {
        return upper_bound(constraints[c], assignment, max_coeff) >= constraints[c].lower;
    }

    bool solve(std::vector<int> &assignment, size_t next) {
        if (budget == 0)
            return false;
        --budget;
        if (next == order.size()) {
            for (size_t c = 0; c < constraints.size(); ++c)
                if (!feasible(c, assignment))
                    return false;
            return true;
        }
        int id = order[next];
        for (unsigned v = 0; v <= max_coeff; ++v) {
            assignment[id] = int(v);
            bool pruned = false;
            for (size_t c : touching[size_t(id)])
                if (!feasible(c, assignment)) {
                    pruned = true;
                    break;
                }
            if (!pruned && solve(assignment, next + 1))
                return true;
        }
        assignment[id] = -1;
        return false;
    }
};

} // namespace

std::optional<Interpretation> search_interpretation(const AdpProblem &problem,
                                                    const SearchOptions &opts) {
    // collect every symbol occurring in the problem
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

    SymbolicContext ctx;
    ctx.max_coeff = opts.max_coeff;
    int next_id = 0;
    auto add_template = [&](SymbolId sym, bool annotated) {
        uint32_t arity = symbol_info(sym).arity;
        std::vector<std::pair<uint32_t, int>> slots;
        slots.emplace_back(0u, next_id);
        ctx.slots.push_back({sym, annotated, 0u});
        ++next_id;
        if (opts.cross_terms && arity <= 5) {
            for (uint32_t mask = 1; mask < (1u << arity); ++mask) {
                slots.emplace_back(mask, next_id);
                ctx.slots.push_back({sym, annotated, mask});
                ++next_id;
            }
        } else {
            for (uint32_t i = 0; i < arity; ++i) {
                slots.emplace_back(1u << i, next_id);
                ctx.slots.push_back({sym, annotated, 1u << i});
                ++next_id;
            }
        }
        ctx.templates[{sym, annotated}] = std::move(slots);
    };
    for (SymbolId sym : symbols)
        add_template(sym, false);
    for (SymbolId sym : problem.defined())
        add_template(sym, true);

    // base constraints: conditions (1) and (2) for every ADP
    std::vector<Constraint> base;
    std::vector<SPoly> lhs_sharp(problem.size());
    std::vector<SPoly> lhs_plain(problem.size());
    for (size_t i = 0; i < problem.size(); ++i) {
        const Adp &adp = problem[i];
        lhs_plain[i] = ctx.interpret(adp.lhs);
        lhs_sharp[i] = ctx.interpret(annotate_root(adp.lhs));
        if (adp.flag)
            push_geq(base, lhs_plain[i], ctx.expected(adp.rhs, ExpectationMode::Plain));
        push_geq(base, lhs_sharp[i], ctx.expected(adp.rhs, ExpectationMode::AnnotatedSum));
    }

    // strict candidates: (adp, j) for ADPs that still carry annotations, so
    // that flattening the strict set changes the problem
    uint64_t budget_left = opts.node_budget;
    for (size_t i = 0; i < problem.size(); ++i) {
        const Adp &adp = problem[i];
        if (!adp.has_annotations())
            continue;
        for (size_t j = 0; j < adp.rhs.size(); ++j) {
            std::vector<Constraint> raw;
            push_gt(raw, lhs_sharp[i], ctx.annotated_sum(adp.rhs.term(j)));
            if (adp.flag)
                push_geq(raw, lhs_plain[i], ctx.interpret(flatten(adp.rhs.term(j))));
            raw.insert(raw.end(), base.begin(), base.end());

            std::vector<IntConstraint> constraints;
            for (const Constraint &c : raw)
                if (auto frozen = freeze(c))
                    constraints.push_back(std::move(*frozen));

            // assignment order: unknowns by first occurrence, strict first
            std::vector<int> order;
            std::vector<char> seen(next_id, 0);
            for (const IntConstraint &c : constraints)
                for (const auto &[m, cc] : c.terms)
                    for (int id : m)
                        if (!seen[id]) {
                            seen[id] = 1;
                            order.push_back(id);
                        }

            Solver solver{std::move(constraints), order, opts.max_coeff, budget_left, {}};
            solver.index(size_t(next_id));
            std::vector<int> assignment(next_id, -1);
            bool found = solver.solve(assignment, 0);
            budget_left = solver.budget;
            if (!found) {
                if (budget_left == 0)
                    return std::nullopt;
                continue;
            }
            Interpretation pol;
            for (int id = 0; id < next_id; ++id) {
                const TemplateSlot &slot = ctx.slots[id];
                int v = assignment[id] < 0 ? 0 : assignment[id];
                SymPoly &sp = pol.entries[{slot.sym, slot.annotated}];
                if (v != 0)
                    sp.coeffs[slot.mask] = v;
            }
            for (SymbolId sym : symbols)
                pol.entries.try_emplace({sym, false});
            for (SymbolId sym : problem.defined())
                pol.entries.try_emplace({sym, true});
            RpCheck check = check_reduction_pair(problem, pol);
            bool strict_has_annotated = false;
            for (size_t k : check.strict_set)
                if (problem[k].has_annotations())
                    strict_has_annotated = true;
            if (check.conditions_ok && strict_has_annotated)
                return pol;
        }
    }
    return std::nullopt;
}

} // namespace adp
