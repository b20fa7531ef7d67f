#include "adp/term.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace adp {

// ---------------------------------------------------------------- interning

namespace {

struct SymbolPool {
    std::mutex mu;
    std::vector<SymbolInfo> infos;
    std::unordered_map<std::string, SymbolId> by_name;
};

SymbolPool &symbol_pool() {
    static SymbolPool pool;
    return pool;
}

struct VarPool {
    std::mutex mu;
    std::vector<std::string> names;
    std::unordered_map<std::string, VarId> by_name;
};

VarPool &var_pool() {
    static VarPool pool;
    return pool;
}

std::atomic<uint64_t> fresh_counter{0};

} // namespace

SymbolId intern_symbol(const std::string &name, uint32_t arity) {
    auto &pool = symbol_pool();
    std::lock_guard<std::mutex> lock(pool.mu);
    std::string key = name + "/" + std::to_string(arity);
    auto it = pool.by_name.find(key);
    if (it != pool.by_name.end())
        return it->second;
    SymbolId id = static_cast<SymbolId>(pool.infos.size());
    pool.infos.push_back({name, arity});
    pool.by_name.emplace(key, id);
    return id;
}

const SymbolInfo &symbol_info(SymbolId id) {
    auto &pool = symbol_pool();
    std::lock_guard<std::mutex> lock(pool.mu);
    return pool.infos.at(id);
}

std::optional<SymbolId> lookup_symbol(const std::string &name, uint32_t arity) {
    auto &pool = symbol_pool();
    std::lock_guard<std::mutex> lock(pool.mu);
    auto it = pool.by_name.find(name + "/" + std::to_string(arity));
    if (it == pool.by_name.end())
        return std::nullopt;
    return it->second;
}

VarId intern_var(const std::string &name) {
    auto &pool = var_pool();
    std::lock_guard<std::mutex> lock(pool.mu);
    auto it = pool.by_name.find(name);
    if (it != pool.by_name.end())
        return it->second;
    VarId id = static_cast<VarId>(pool.names.size());
    pool.names.push_back(name);
    pool.by_name.emplace(name, id);
    return id;
}

const std::string &var_name(VarId v) {
    auto &pool = var_pool();
    std::lock_guard<std::mutex> lock(pool.mu);
    return pool.names.at(v);
}

VarId fresh_var() {
    uint64_t n = fresh_counter.fetch_add(1);
    return intern_var("_v" + std::to_string(n));
}

// ---------------------------------------------------------------- positions

std::string to_string(const Position &pos) {
    if (pos.empty())
        return "eps";
    std::string out;
    for (size_t i = 0; i < pos.size(); ++i) {
        if (i)
            out += '.';
        out += std::to_string(pos[i]);
    }
    return out;
}

bool strictly_above(const Position &a, const Position &b) {
    if (a.size() >= b.size())
        return false;
    return std::equal(a.begin(), a.end(), b.begin());
}

// ---------------------------------------------------------------- Term

namespace {
size_t hash_combine(size_t seed, size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}
} // namespace

Term Term::var(VarId v) {
    auto node = std::make_shared<Node>();
    node->is_var = true;
    node->annotated = false;
    node->head = v;
    node->hash = hash_combine(0x9b5ea3, v);
    node->size = 1;
    return Term(std::move(node));
}

Term Term::app(SymbolId sym, bool annotated, std::vector<Term> args) {
    if (symbol_info(sym).arity != args.size())
        throw TermError("arity mismatch for symbol '" + symbol_info(sym).name + "'");
    auto node = std::make_shared<Node>();
    node->is_var = false;
    node->annotated = annotated;
    node->head = sym;
    size_t h = hash_combine(annotated ? 0x517cc1 : 0x2545f4, sym);
    size_t sz = 1;
    for (const Term &a : args) {
        h = hash_combine(h, a.hash());
        sz += a.node_count();
    }
    node->hash = h;
    node->size = sz;
    node->args = std::move(args);
    return Term(std::move(node));
}

bool Term::operator==(const Term &other) const {
    if (node_ == other.node_)
        return true;
    if (!node_ || !other.node_)
        return false;
    if (node_->hash != other.node_->hash || node_->is_var != other.node_->is_var ||
        node_->head != other.node_->head || node_->annotated != other.node_->annotated ||
        node_->args.size() != other.node_->args.size())
        return false;
    for (size_t i = 0; i < node_->args.size(); ++i)
        if (node_->args[i] != other.node_->args[i])
            return false;
    return true;
}

bool Term::operator<(const Term &other) const {
    if (*this == other)
        return false;
    if (node_->is_var != other.node_->is_var)
        return node_->is_var;
    if (node_->head != other.node_->head)
        return node_->head < other.node_->head;
    if (node_->annotated != other.node_->annotated)
        return !node_->annotated;
    if (node_->args.size() != other.node_->args.size())
        return node_->args.size() < other.node_->args.size();
    for (size_t i = 0; i < node_->args.size(); ++i) {
        if (node_->args[i] != other.node_->args[i])
            return node_->args[i] < other.node_->args[i];
    }
    return false;
}

std::string Term::str() const {
    if (!node_)
        return "<null>";
    if (is_var())
        return var_name(var());
    std::string out = symbol_info(sym()).name;
    if (annotated())
        out += '#';
    if (!args().empty()) {
        out += '(';
        for (size_t i = 0; i < args().size(); ++i) {
            if (i)
                out += ',';
            out += args()[i].str();
        }
        out += ')';
    }
    return out;
}

// ---------------------------------------------------------------- Substitution

bool Substitution::bind(VarId v, const Term &t) {
    auto it = map_.find(v);
    if (it != map_.end())
        return it->second == t;
    map_.emplace(v, t);
    return true;
}

const Term *Substitution::lookup(VarId v) const {
    auto it = map_.find(v);
    return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::apply(const Term &t) const {
    if (map_.empty())
        return t;
    if (t.is_var()) {
        const Term *bound = lookup(t.var());
        return bound ? *bound : t;
    }
    bool changed = false;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term &a : t.args()) {
        args.push_back(apply(a));
        if (args.back() != a)
            changed = true;
    }
    if (!changed)
        return t;
    return Term::app(t.sym(), t.annotated(), std::move(args));
}

std::string Substitution::str() const {
    std::string out = "{";
    bool first = true;
    for (const auto &[v, t] : map_) {
        if (!first)
            out += ", ";
        first = false;
        out += var_name(v) + "/" + t.str();
    }
    return out + "}";
}

// ---------------------------------------------------------------- subterms

bool valid_position(const Term &t, const Position &pos) {
    const Term *cur = &t;
    for (uint32_t idx : pos) {
        if (cur->is_var() || idx == 0 || idx > cur->args().size())
            return false;
        cur = &cur->args()[idx - 1];
    }
    return true;
}

Term subterm_at(const Term &t, const Position &pos) {
    const Term *cur = &t;
    for (uint32_t idx : pos) {
        if (cur->is_var() || idx == 0 || idx > cur->args().size())
            throw TermError("invalid position " + to_string(pos) + " in " + t.str());
        cur = &cur->args()[idx - 1];
    }
    return *cur;
}

Term replace_at(const Term &t, const Position &pos, const Term &replacement) {
    if (pos.empty())
        return replacement;
    if (t.is_var() || pos.front() == 0 || pos.front() > t.args().size())
        throw TermError("invalid position " + to_string(pos) + " in " + t.str());
    std::vector<Term> args = t.args();
    Position rest(pos.begin() + 1, pos.end());
    args[pos.front() - 1] = replace_at(args[pos.front() - 1], rest, replacement);
    return Term::app(t.sym(), t.annotated(), std::move(args));
}

// ---------------------------------------------------------------- annotations

namespace {
void collect_annotated(const Term &t, Position &prefix, std::set<Position> &out) {
    if (t.is_var())
        return;
    if (t.annotated())
        out.insert(prefix);
    for (uint32_t i = 0; i < t.args().size(); ++i) {
        prefix.push_back(i + 1);
        collect_annotated(t.args()[i], prefix, out);
        prefix.pop_back();
    }
}
} // namespace

std::set<Position> annotated_positions(const Term &t) {
    std::set<Position> out;
    Position prefix;
    collect_annotated(t, prefix, out);
    return out;
}

bool has_annotation(const Term &t) {
    if (t.is_var())
        return false;
    if (t.annotated())
        return true;
    for (const Term &a : t.args())
        if (has_annotation(a))
            return true;
    return false;
}

namespace {
Term annotate_rec(const Term &t, Position &prefix, const std::set<Position> &positions) {
    if (t.is_var())
        return t;
    bool want = positions.count(prefix) > 0;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (uint32_t i = 0; i < t.args().size(); ++i) {
        prefix.push_back(i + 1);
        args.push_back(annotate_rec(t.args()[i], prefix, positions));
        prefix.pop_back();
    }
    return Term::app(t.sym(), want, std::move(args));
}
} // namespace

Term annotate(const Term &t, const std::set<Position> &positions, const std::set<SymbolId> &defined) {
    for (const Position &pos : positions) {
        Term sub = subterm_at(t, pos);
        if (sub.is_var() || !defined.count(sub.sym()))
            throw TermError("position " + to_string(pos) + " does not root a defined symbol in " + t.str());
    }
    Position prefix;
    return annotate_rec(t, prefix, positions);
}

Term annotate_all(const Term &t, const std::set<SymbolId> &defined) {
    if (t.is_var())
        return t;
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term &a : t.args())
        args.push_back(annotate_all(a, defined));
    return Term::app(t.sym(), defined.count(t.sym()) > 0, std::move(args));
}

Term annotate_root(const Term &t) {
    if (t.is_var())
        throw TermError("cannot annotate the root of a variable");
    Term flat = flatten(t);
    return Term::app(flat.sym(), true, flat.args());
}

Term flatten(const Term &t) {
    if (t.is_var())
        return t;
    bool changed = t.annotated();
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term &a : t.args()) {
        args.push_back(flatten(a));
        if (args.back() != a)
            changed = true;
    }
    if (!changed)
        return t;
    return Term::app(t.sym(), false, std::move(args));
}

Term strip_above(const Term &t, const Position &pos) {
    if (!valid_position(t, pos))
        throw TermError("invalid position " + to_string(pos) + " in " + t.str());
    if (pos.empty())
        return t;
    // walk down the path, clearing annotation bits on every proper prefix
    std::vector<Term> args = t.args();
    Position rest(pos.begin() + 1, pos.end());
    args[pos.front() - 1] = strip_above(args[pos.front() - 1], rest);
    return Term::app(t.sym(), false, std::move(args));
}

std::vector<std::pair<Position, Term>> annotated_subterms(const Term &t) {
    std::vector<std::pair<Position, Term>> out;
    for (const Position &pos : annotated_positions(t))
        out.emplace_back(pos, flatten(subterm_at(t, pos)));
    return out;
}

// ---------------------------------------------------------------- match/unify

bool match_into(const Term &pattern, const Term &subject, Substitution &sigma) {
    if (pattern.is_var())
        return sigma.bind(pattern.var(), subject);
    if (subject.is_var())
        return false;
    if (pattern.sym() != subject.sym() || pattern.annotated() != subject.annotated())
        return false;
    for (size_t i = 0; i < pattern.args().size(); ++i)
        if (!match_into(pattern.args()[i], subject.args()[i], sigma))
            return false;
    return true;
}

std::optional<Substitution> match(const Term &pattern, const Term &subject) {
    Substitution sigma;
    if (!match_into(pattern, subject, sigma))
        return std::nullopt;
    return sigma;
}

namespace {
bool occurs(VarId v, const Term &t) {
    if (t.is_var())
        return t.var() == v;
    for (const Term &a : t.args())
        if (occurs(v, a))
            return true;
    return false;
}

bool unify_rec(Term a, Term b, Substitution &sigma) {
    a = sigma.apply(a);
    b = sigma.apply(b);
    if (a == b)
        return true;
    if (a.is_var()) {
        if (occurs(a.var(), b))
            return false;
        Substitution unit;
        unit.bind(a.var(), b);
        // keep sigma idempotent: push the new binding through existing images
        Substitution next;
        for (const auto &[v, img] : sigma.entries())
            next.bind(v, unit.apply(img));
        next.bind(a.var(), b);
        sigma = next;
        return true;
    }
    if (b.is_var())
        return unify_rec(b, a, sigma);
    if (a.sym() != b.sym() || a.annotated() != b.annotated())
        return false;
    for (size_t i = 0; i < a.args().size(); ++i)
        if (!unify_rec(a.args()[i], b.args()[i], sigma))
            return false;
    return true;
}
} // namespace

std::optional<Substitution> unify(const Term &a, const Term &b) {
    Substitution sigma;
    if (!unify_rec(a, b, sigma))
        return std::nullopt;
    return sigma;
}

// ---------------------------------------------------------------- variables

namespace {
void vars_rec(const Term &t, std::set<VarId> &out) {
    if (t.is_var()) {
        out.insert(t.var());
        return;
    }
    for (const Term &a : t.args())
        vars_rec(a, out);
}

bool linear_rec(const Term &t, std::set<VarId> &seen) {
    if (t.is_var())
        return seen.insert(t.var()).second;
    for (const Term &a : t.args())
        if (!linear_rec(a, seen))
            return false;
    return true;
}
} // namespace

std::set<VarId> vars_of(const Term &t) {
    std::set<VarId> out;
    vars_rec(t, out);
    return out;
}

bool is_ground(const Term &t) {
    if (t.is_var())
        return false;
    for (const Term &a : t.args())
        if (!is_ground(a))
            return false;
    return true;
}

bool is_linear_term(const Term &t) {
    std::set<VarId> seen;
    return linear_rec(t, seen);
}

Substitution renaming_for(const std::set<VarId> &vars) {
    Substitution sigma;
    for (VarId v : vars)
        sigma.bind(v, Term::var(fresh_var()));
    return sigma;
}

Term rename_fresh(const Term &t) {
    return renaming_for(vars_of(t)).apply(t);
}

bool restricts_to_renaming(const Substitution &sigma, const std::set<VarId> &domain) {
    std::set<VarId> images;
    for (VarId v : domain) {
        const Term *img = sigma.lookup(v);
        if (!img)
            continue;
        if (!img->is_var() || !images.insert(img->var()).second)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------- Cap

namespace {
Term cap_below(const Term &t, const std::set<SymbolId> &defined, const CapOptions &opts) {
    if (t.is_var())
        return opts.freshen_vars || opts.cap_everything ? Term::var(fresh_var()) : t;
    if (opts.cap_everything || defined.count(t.sym()))
        return Term::var(fresh_var());
    std::vector<Term> args;
    args.reserve(t.args().size());
    for (const Term &a : t.args())
        args.push_back(cap_below(a, defined, opts));
    return Term::app(t.sym(), t.annotated(), std::move(args));
}
} // namespace

Term cap(const Term &t, const std::set<SymbolId> &defined, const CapOptions &opts) {
    if (opts.protect_root && !t.is_var()) {
        std::vector<Term> args;
        args.reserve(t.args().size());
        for (const Term &a : t.args())
            args.push_back(cap_below(a, defined, opts));
        return Term::app(t.sym(), t.annotated(), std::move(args));
    }
    return cap_below(t, defined, opts);
}

} // namespace adp
