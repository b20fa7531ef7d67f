#include "adp/proof.hpp"

#include "adp/processors.hpp"

#include <json.hpp>

#include <sstream>

namespace adp {

bool ProofNode::solved() const {
    if (children.empty())
        return processor == "solved";
    for (const ProofNode &child : children)
        if (!child.solved())
            return false;
    return true;
}

const ProofNode *ProofNode::find(const std::string &processor_name) const {
    if (processor == processor_name)
        return this;
    for (const ProofNode &child : children) {
        const ProofNode *hit = child.find(processor_name);
        if (hit)
            return hit;
    }
    return nullptr;
}

// -------------------------------------------------------------------- replay

namespace {

bool children_match(const std::vector<AdpProblem> &produced, const std::vector<ProofNode> &recorded) {
    if (produced.size() != recorded.size())
        return false;
    for (size_t i = 0; i < produced.size(); ++i)
        if (problem_key(produced[i]) != problem_key(recorded[i].problem))
            return false;
    return true;
}

struct ReplayVisitor {
    const ProofNode &node;
    std::string *why;

    bool fail(const std::string &message) const {
        if (why)
            *why = node.processor + ": " + message;
        return false;
    }

    bool operator()(const JustSolved &) const {
        return is_solved(node.problem) || fail("problem still carries annotations");
    }
    bool operator()(const JustFailed &) const { return true; }
    bool operator()(const JustDg &) const {
        ProcessorResult result = proc_dependency_graph(node.problem);
        return children_match(result.children, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustUt &) const {
        ProcessorResult result = proc_usable_terms(node.problem);
        return children_match(result.children, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustUr &) const {
        ProcessorResult result = proc_usable_rules(node.problem);
        return children_match(result.children, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustRp &just) const {
        RpResult result = proc_reduction_pair(node.problem, just.pol);
        if (!result.ok)
            return fail("interpretation no longer verifies: " + result.error);
        return children_match({result.child}, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustPr &) const {
        PrResult result = proc_probability_removal(node.problem);
        if (!result.ok)
            return fail(result.error);
        return children_match({result.child}, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustRewrite &just) const {
        RewriteOutcome result = proc_rewriting(node.problem, just.adp, just.j, just.tau);
        if (!result.ok)
            return fail(result.error);
        return children_match({result.child}, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustInst &just) const {
        TransformOutcome result = proc_instantiation(node.problem, just.adp);
        if (!result.ok)
            return fail(result.error);
        return children_match({result.child}, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustFinst &just) const {
        TransformOutcome result = proc_forward_instantiation(node.problem, just.adp);
        if (!result.ok)
            return fail(result.error);
        return children_match({result.child}, node.children) || fail("children differ on replay");
    }
    bool operator()(const JustRoi &just) const {
        TransformOutcome result =
            proc_rule_overlap_instantiation(node.problem, just.adp, just.j, just.t_pos);
        if (!result.ok)
            return fail(result.error);
        return children_match({result.child}, node.children) || fail("children differ on replay");
    }
};

} // namespace

bool reverify(const ProofNode &node, std::string *why_failed) {
    if (!std::visit(ReplayVisitor{node, why_failed}, node.just))
        return false;
    for (const ProofNode &child : node.children)
        if (!reverify(child, why_failed))
            return false;
    return true;
}

// ----------------------------------------------------------------- rendering

namespace {

std::string interpretation_line(const Interpretation &pol) {
    // only print nonzero templates; zero-mapped symbols are summarized
    std::string nonzero;
    size_t zeros = 0;
    for (const auto &[key, sp] : pol.entries) {
        if (sp.coeffs.empty()) {
            ++zeros;
            continue;
        }
        if (!nonzero.empty())
            nonzero += ", ";
        nonzero += "Pol(" + symbol_info(key.first).name + (key.second ? "#" : "") +
                   ") = " + sp.str(symbol_info(key.first).arity);
    }
    if (nonzero.empty())
        nonzero = "all symbols mapped to 0";
    else if (zeros > 0)
        nonzero += ", all other symbols mapped to 0";
    return nonzero;
}

std::string indices_str(const std::vector<size_t> &xs) {
    std::string out = "{";
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ", ";
        out += std::to_string(xs[i]);
    }
    return out + "}";
}

struct TextVisitor {
    std::string operator()(const JustSolved &) const { return "no annotations left"; }
    std::string operator()(const JustFailed &just) const { return just.reason; }
    std::string operator()(const JustDg &just) const {
        std::string out = "edges: ";
        bool first = true;
        for (const auto &[a, b] : just.edges) {
            if (!first)
                out += ", ";
            first = false;
            out += std::to_string(a) + "->" + std::to_string(b);
        }
        if (just.edges.empty())
            out += "none";
        out += "; sccs: ";
        if (just.sccs.empty())
            out += "none";
        for (size_t i = 0; i < just.sccs.size(); ++i) {
            if (i)
                out += ", ";
            std::vector<size_t> scc(just.sccs[i].begin(), just.sccs[i].end());
            out += indices_str(scc);
        }
        return out;
    }
    std::string operator()(const JustUt &just) const {
        std::string out = "de-annotated non-usable terms: ";
        for (size_t i = 0; i < just.removed.size(); ++i) {
            if (i)
                out += ", ";
            out += just.removed[i];
        }
        return out;
    }
    std::string operator()(const JustUr &just) const {
        return "flag set to false for " + indices_str(just.deflagged);
    }
    std::string operator()(const JustRp &just) const {
        return interpretation_line(just.pol) + "; strictly decreasing: " +
               indices_str(just.strict_set);
    }
    std::string operator()(const JustPr &) const {
        return "all distributions trivial; classical (dp, np) presentation applies";
    }
    std::string operator()(const JustRewrite &just) const {
        return "ADP " + std::to_string(just.adp) + ", support term " + std::to_string(just.j + 1) +
               ", position " + to_string(just.tau) + ", rule " + std::to_string(just.rule) +
               ", case " + to_string(just.side);
    }
    std::string operator()(const JustInst &just) const {
        return "ADP " + std::to_string(just.adp) + ", " + std::to_string(just.generated) +
               " instantiated variant(s)";
    }
    std::string operator()(const JustFinst &just) const {
        return "ADP " + std::to_string(just.adp) + ", " + std::to_string(just.generated) +
               " instantiated variant(s)";
    }
    std::string operator()(const JustRoi &just) const {
        return "ADP " + std::to_string(just.adp) + ", support term " + std::to_string(just.j + 1) +
               ", subterm at " + to_string(just.t_pos) + ", " + std::to_string(just.generated) +
               " replacement(s)";
    }
};

void render_node(const ProofNode &node, std::ostringstream &out, int &counter, int depth) {
    std::string indent(static_cast<size_t>(depth) * 2, ' ');
    if (node.children.empty()) {
        if (node.processor == "solved")
            out << indent << "solved: no annotations left.\n";
        else
            out << indent << "stuck: " << std::get<JustFailed>(node.just).reason << "\n";
        return;
    }
    out << indent << "step " << ++counter << ": " << node.processor << " ("
        << std::visit(TextVisitor{}, node.just) << ")\n";
    for (size_t i = 0; i < node.children.size(); ++i) {
        const ProofNode &child = node.children[i];
        if (node.children.size() > 1) {
            out << indent << "  sub-problem " << (i + 1) << " of " << node.children.size() << ":\n";
            for (const std::string &line : {child.problem.str()}) {
                std::istringstream lines(line);
                std::string l;
                while (std::getline(lines, l))
                    out << indent << "    " << l << "\n";
            }
            render_node(child, out, counter, depth + 2);
        } else {
            std::istringstream lines(child.problem.str());
            std::string l;
            while (std::getline(lines, l))
                out << indent << "  " << l << "\n";
            render_node(child, out, counter, depth + 1);
        }
    }
}

} // namespace

std::string render_text(const ProofNode &root, bool yes, const std::string &failure_summary) {
    std::ostringstream out;
    if (root.processor == "solved" && root.children.empty()) {
        out << "trivially iAST: no annotations\n";
        out << "verdict: YES (almost-surely innermost terminating)\n";
        return out.str();
    }
    out << "canonical ADP problem:\n";
    std::istringstream lines(root.problem.str());
    std::string l;
    while (std::getline(lines, l))
        out << "  " << l << "\n";
    int counter = 0;
    render_node(root, out, counter, 0);
    if (yes)
        out << "verdict: YES (almost-surely innermost terminating)\n";
    else
        out << "verdict: MAYBE (" << failure_summary << ")\n";
    return out.str();
}

namespace {

nlohmann::ordered_json justification_json(const ProofNode &node) {
    nlohmann::ordered_json j;
    std::visit(
        [&](const auto &just) {
            using T = std::decay_t<decltype(just)>;
            if constexpr (std::is_same_v<T, JustSolved>) {
                j["kind"] = "solved";
            } else if constexpr (std::is_same_v<T, JustFailed>) {
                j["kind"] = "failed";
                j["reason"] = just.reason;
            } else if constexpr (std::is_same_v<T, JustDg>) {
                j["kind"] = "dependency_graph";
                nlohmann::ordered_json edges = nlohmann::ordered_json::array();
                for (const auto &[a, b] : just.edges)
                    edges.push_back({a, b});
                j["edges"] = edges;
                j["sccs"] = just.sccs;
            } else if constexpr (std::is_same_v<T, JustUt>) {
                j["kind"] = "usable_terms";
                j["removed"] = just.removed;
            } else if constexpr (std::is_same_v<T, JustUr>) {
                j["kind"] = "usable_rules";
                j["deflagged"] = just.deflagged;
            } else if constexpr (std::is_same_v<T, JustRp>) {
                j["kind"] = "reduction_pair";
                nlohmann::ordered_json pol;
                for (const auto &[key, sp] : just.pol.entries)
                    pol[symbol_info(key.first).name + (key.second ? "#" : "")] =
                        sp.str(symbol_info(key.first).arity);
                j["interpretation"] = pol;
                j["strict"] = just.strict_set;
            } else if constexpr (std::is_same_v<T, JustPr>) {
                j["kind"] = "probability_removal";
            } else if constexpr (std::is_same_v<T, JustRewrite>) {
                j["kind"] = "rewriting";
                j["adp"] = just.adp;
                j["support_term"] = just.j;
                j["position"] = to_string(just.tau);
                j["rule"] = just.rule;
                j["side_condition"] = to_string(just.side);
            } else if constexpr (std::is_same_v<T, JustInst>) {
                j["kind"] = "instantiation";
                j["adp"] = just.adp;
                j["generated"] = just.generated;
            } else if constexpr (std::is_same_v<T, JustFinst>) {
                j["kind"] = "forward_instantiation";
                j["adp"] = just.adp;
                j["generated"] = just.generated;
            } else if constexpr (std::is_same_v<T, JustRoi>) {
                j["kind"] = "rule_overlap_instantiation";
                j["adp"] = just.adp;
                j["support_term"] = just.j;
                j["subterm_position"] = to_string(just.t_pos);
                j["generated"] = just.generated;
            }
        },
        node.just);
    return j;
}

nlohmann::ordered_json node_json(const ProofNode &node) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json adps = nlohmann::ordered_json::array();
    for (const Adp &adp : node.problem.adps())
        adps.push_back(adp.str());
    j["problem"] = adps;
    if (node.problem.classical())
        j["classical"] = true;
    j["processor"] = node.processor;
    j["justification"] = justification_json(node);
    nlohmann::ordered_json children = nlohmann::ordered_json::array();
    for (const ProofNode &child : node.children)
        children.push_back(node_json(child));
    j["children"] = children;
    return j;
}

} // namespace

std::string render_machine(const ProofNode &root, bool yes, const std::string &failure_summary) {
    nlohmann::ordered_json j;
    j["verdict"] = yes ? "YES" : "MAYBE";
    if (!yes)
        j["failure"] = failure_summary;
    j["proof"] = node_json(root);
    return j.dump(2) + "\n";
}

} // namespace adp
