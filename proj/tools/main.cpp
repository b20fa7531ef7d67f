#include "adp/engine.hpp"
#include "adp/oracle.hpp"
#include "adp/parse.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Prover for almost-sure innermost termination of probabilistic term rewrite "
                 "systems, with a sampling oracle for cross-validation"};
    app.require_subcommand(1);

    std::string file;
    adp::Config cfg;
    unsigned timeout_seconds = 300;

    CLI::App *prove_cmd = app.add_subcommand("prove", "decide YES (iAST) or MAYBE for a system");
    prove_cmd->add_option("file", file, "rule file")->required();
    prove_cmd->add_option("--max-coeff", cfg.max_coeff, "coefficient bound for interpretations");
    prove_cmd->add_option("--transform-depth", cfg.transform_depth,
                          "budget for transformational processors per branch");
    prove_cmd->add_option("--timeout", timeout_seconds, "wall-clock timeout in seconds");
    bool no_transforms = false;
    prove_cmd->add_flag("--no-transforms", no_transforms, "disable transformational processors");
    prove_cmd->add_option("--proof-format", cfg.proof_format, "text|machine")
        ->check(CLI::IsMember({"text", "machine"}));
    prove_cmd->add_option("--jobs", cfg.jobs, "solve independent sub-problems in parallel");
    prove_cmd->add_option("--seed", cfg.seed, "seed (reserved for strategy randomization)");

    std::string start_text;
    adp::SimConfig sim;
    unsigned mass_depth = 0;
    bool use_depth = false;
    bool adversarial = false;
    std::string rule_policy = "declaration-order";

    CLI::App *sim_cmd = app.add_subcommand("simulate", "sample innermost runs / exact leaf mass");
    sim_cmd->add_option("file", file, "rule file")->required();
    sim_cmd->add_option("--start", start_text, "start term")->required();
    sim_cmd->add_option("--trials", sim.trials, "number of Monte-Carlo trials");
    sim_cmd->add_option("--step-cap", sim.step_cap, "per-run rewrite step cap");
    sim_cmd->add_option("--size-cap", sim.size_cap, "per-run term size cap");
    sim_cmd->add_option("--seed", sim.seed, "base seed");
    sim_cmd->add_option("--depth", mass_depth, "exact mode: leaf mass of the truncated tree")
        ->each([&](const std::string &) { use_depth = true; });
    sim_cmd->add_flag("--adversarial", adversarial,
                      "exact mode: minimize leaf mass over redex and rule choices");
    sim_cmd->add_option("--rule-policy", rule_policy, "declaration-order|uniform-random")
        ->check(CLI::IsMember({"declaration-order", "uniform-random"}));

    CLI11_PARSE(app, argc, argv);

    try {
        std::string text = read_file(file);
        adp::ParsedSystem parsed = adp::parse_ptrs(text);

        if (prove_cmd->parsed()) {
            cfg.enable_transforms = !no_transforms;
            cfg.timeout_seconds = timeout_seconds;
            adp::Verdict verdict = adp::prove(parsed.system, cfg);
            std::cout << adp::render_proof(verdict, cfg.proof_format);
            return verdict.yes ? 0 : 1;
        }

        adp::Term start = adp::parse_term(start_text, parsed);
        if (use_depth) {
            adp::Rat mass = adp::bounded_mass(parsed.system, start, mass_depth, adversarial);
            std::cout << "leaf mass at depth " << mass_depth << ": " << adp::to_string(mass)
                      << "\n";
            return 0;
        }
        sim.rule_policy = rule_policy == "uniform-random" ? adp::RulePolicy::UniformRandom
                                                          : adp::RulePolicy::DeclarationOrder;
        adp::Estimate est = adp::estimate_termination(parsed.system, start, sim);
        std::cout << "terminated " << est.terminated << "/" << est.trials
                  << " runs (censored runs count as non-terminated)\n";
        std::cout << "estimate: " << adp::to_string(est.point) << " ("
                  << double(est.terminated) / double(est.trials) << ")\n";
        std::cout << "wilson 95% interval: [" << est.lower << ", " << est.upper << "]\n";
        std::cout << "note: policy-relative estimate (position: leftmost-innermost, rules: "
                  << rule_policy << ")\n";
        return 0;
    } catch (const adp::ParseError &e) {
        std::cerr << "input error: " << file << ":" << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
