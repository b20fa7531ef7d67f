#pragma once

#include "adp/proof.hpp"
#include "adp/ptrs.hpp"

#include <string>

namespace adp {

struct Config {
    unsigned max_coeff = 2;
    unsigned transform_depth = 8;
    double timeout_seconds = 300.0;
    bool enable_transforms = true;
    uint64_t seed = 0;
    std::string proof_format = "text"; // "text" | "machine"
    unsigned jobs = 1;
    uint64_t search_node_budget = 150000;
};

struct Verdict {
    bool yes = false;
    bool timed_out = false;
    ProofNode root;
    std::string failure_summary; // last attempted processors on failing leaves
};

// Runs the pipeline on the canonical ADP problem of the system:
// dependency graph, usable terms, usable rules, reduction pair, probability
// removal, then the transformational processors as a guarded fallback.
// Answers YES only when every leaf is solved and the whole proof tree
// re-verifies.
Verdict prove(const Ptrs &system, const Config &cfg = {});

std::string render_proof(const Verdict &verdict, const std::string &format);

} // namespace adp
