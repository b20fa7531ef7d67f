#pragma once

#include "adp/adp.hpp"
#include "adp/polysolve.hpp"
#include "adp/transforms.hpp"

#include <string>
#include <variant>
#include <vector>

namespace adp {

struct JustSolved {};
struct JustFailed {
    std::string reason;
};
struct JustDg {
    std::vector<std::vector<size_t>> sccs;
    std::vector<std::pair<size_t, size_t>> edges;
};
struct JustUt {
    std::vector<std::string> removed;
};
struct JustUr {
    std::vector<size_t> deflagged;
};
struct JustRp {
    Interpretation pol;
    std::vector<size_t> strict_set;
};
struct JustPr {};
struct JustRewrite {
    size_t adp;
    size_t j;
    Position tau;
    size_t rule;
    SideCondition side;
};
struct JustInst {
    size_t adp;
    size_t generated;
};
struct JustFinst {
    size_t adp;
    size_t generated;
};
struct JustRoi {
    size_t adp;
    size_t j;
    Position t_pos;
    size_t generated;
};

using Justification = std::variant<JustSolved, JustFailed, JustDg, JustUt, JustUr, JustRp, JustPr,
                                   JustRewrite, JustInst, JustFinst, JustRoi>;

// One processor application: `problem` is the snapshot the processor ran on,
// `children` the nodes for the resulting sub-problems. Leaves are "solved"
// or "failed".
struct ProofNode {
    AdpProblem problem;
    std::string processor;
    Justification just;
    std::vector<ProofNode> children;

    bool solved() const;
    const ProofNode *find(const std::string &processor_name) const;
};

// Re-runs every recorded processor application with its justification and
// compares the produced children (modulo variable renaming). The engine
// calls this before claiming YES.
bool reverify(const ProofNode &node, std::string *why_failed = nullptr);

std::string render_text(const ProofNode &root, bool yes, const std::string &failure_summary);
std::string render_machine(const ProofNode &root, bool yes, const std::string &failure_summary);

} // namespace adp
