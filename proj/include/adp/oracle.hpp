#pragma once

#include "adp/ptrs.hpp"

#include <cstdint>
#include <string>

namespace adp {

class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string &what) : std::runtime_error(what) {}
};

enum class RulePolicy { DeclarationOrder, UniformRandom };

struct SimConfig {
    uint64_t trials = 1000;
    uint64_t step_cap = 10000;
    uint64_t size_cap = 1000000;
    uint64_t seed = 0;
    RulePolicy rule_policy = RulePolicy::DeclarationOrder;
};

struct RunResult {
    bool terminated = false;
    uint64_t steps = 0;
};

// One seeded innermost run: leftmost-innermost position policy, rule choice
// per config, distribution sampled with the trial-derived generator. Stops
// at a normal form or when the step/size cap is hit (censored).
RunResult simulate_run(const Ptrs &system, const Term &start, const SimConfig &cfg,
                       uint64_t trial_index = 0);

struct Estimate {
    Rat point;            // terminated / trials; censored runs count as non-terminated
    double lower = 0.0;   // Wilson 95% bounds
    double upper = 0.0;
    uint64_t terminated = 0;
    uint64_t trials = 0;
};

// Trials are independent with per-trial derived seeds, so results do not
// depend on execution order.
Estimate estimate_termination(const Ptrs &system, const Term &start, const SimConfig &cfg);

// Exact leaf probability mass of the innermost rewrite-sequence tree
// truncated at `depth`. Non-adversarial mode follows the deterministic
// leftmost-innermost / declaration-order policy; adversarial mode takes the
// minimum over all redex and rule choices at every node. Throws OracleError
// when the node budget is exceeded.
Rat bounded_mass(const Ptrs &system, const Term &start, unsigned depth, bool adversarial = false,
                 uint64_t node_budget = 1000000);

} // namespace adp
