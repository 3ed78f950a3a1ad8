// Command-line front end: evaluate scenario documents, run the Monte Carlo
// sampler against a named query, or run the built-in self-check suites.
//
// Exit codes: 0 success, 1 a check or query failed, 2 usage or document error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qprob/born.hpp"
#include "qprob/checks.hpp"
#include "qprob/entanglement.hpp"
#include "qprob/sampler.hpp"
#include "qprob/scenario.hpp"

namespace {

int cmd_run(const std::string& path, const std::string& format, double hbar_override) {
    qprob::Scenario s = qprob::Scenario::load(path);
    if (hbar_override > 0.0) s.set_hbar(hbar_override);
    qprob::Report report = qprob::run_queries(s);
    if (format == "json")
        std::cout << qprob::format_json_lines(report);
    else
        std::cout << qprob::format_table(report);
    return report.all_ok() ? 0 : 1;
}

int cmd_sample(const std::string& path, const std::string& label, std::uint64_t trials,
               std::uint64_t seed) {
    qprob::Scenario s = qprob::Scenario::load(path);
    for (const qprob::Query& q : s.queries()) {
        if (q.label != label) continue;
        if (!q.args.contains("events")) {
            std::cerr << "query '" << label << "' has no event sequence to sample\n";
            return 2;
        }
        qprob::EventSequence seq;
        for (const auto& n : q.args["events"]) seq.push_back(s.event(n.get<std::string>()));
        std::optional<std::vector<double>> times;
        std::optional<qprob::EvolutionFamily> evo;
        if (q.args.contains("times")) {
            times.emplace();
            for (const auto& t : q.args["times"]) times->push_back(t.get<double>());
            evo = s.evolution();
            if (!evo) {
                std::cerr << "query '" << label << "' has times but the scenario has no evolution\n";
                return 2;
            }
        }
        qprob::SampleReport rep = qprob::sample_sequence(
            seq, times, evo, s.pure_state(q.args.value("state", "")), trials, seed);
        std::cout << "trials     " << rep.trials << "\n"
                  << "successes  " << rep.successes << "\n"
                  << "frequency  " << rep.frequency << "\n"
                  << "analytic   " << rep.analytic << "\n";
        if (rep.exact_match)
            std::cout << "exact match: " << (rep.frequency == rep.analytic ? "yes" : "NO") << "\n";
        else
            std::cout << "z score    " << rep.z_score << "\n";
        bool ok = rep.exact_match ? rep.frequency == rep.analytic
                                  : std::abs(rep.z_score) <= 5.0;
        return ok ? 0 : 1;
    }
    std::cerr << "no query labelled '" << label << "' in " << path << "\n";
    return 2;
}

// The two-particle spin outcome table, evaluated live from the three-event
// construction and a random initial state.
void print_spin_table(std::uint64_t seed) {
    qprob::EprTriple epr = qprob::epr_triple();
    qprob::Event not_e1 = qprob::complement(epr.e1);
    qprob::Event not_e2 = qprob::complement(epr.e2);
    std::mt19937_64 rng(seed);
    qprob::CVector v = qprob::random_unit_vector(4, rng);
    while (std::abs(qprob::singlet().vector().dot(v)) <= 1e-3)
        v = qprob::random_unit_vector(4, rng);
    qprob::PureState psi{v};
    auto c = [&](const qprob::EventSequence& target, const qprob::EventSequence& given) {
        return qprob::conditional(target, given, psi).value;
    };
    std::cout << "two-particle spin table (random initial state):\n"
              << "  P(left up    | spin 0)            = " << c({epr.e1}, {epr.e0}) << "\n"
              << "  P(right down | spin 0)            = " << c({epr.e2}, {epr.e0}) << "\n"
              << "  P(right down | spin 0, left up)   = " << c({epr.e2}, {epr.e0, epr.e1})
              << "\n"
              << "  P(left up    | spin 0, right down)= " << c({epr.e1}, {epr.e0, epr.e2})
              << "\n"
              << "  P(right up   | spin 0, left up)   = " << c({not_e2}, {epr.e0, epr.e1})
              << "\n"
              << "  P(left down  | spin 0, right down)= " << c({not_e1}, {epr.e0, epr.e2})
              << "\n"
              << "  P(left up, right down | spin 0)   = " << c({epr.e1, epr.e2}, {epr.e0})
              << "\n"
              << "  P(left up, right up   | spin 0)   = " << c({epr.e1, not_e2}, {epr.e0})
              << "\n";
}

int cmd_check(const std::string& suite, std::uint64_t seed, int instances) {
    bool all_pass = true;
    bool examples = suite == "examples" || suite == "paper" || suite == "all";
    if (examples) {
        print_spin_table(seed + 1);
        qprob::SuiteReport rep = qprob::run_worked_examples_suite(seed, instances);
        std::cout << "worked examples:\n" << qprob::format_suite(rep);
        all_pass = all_pass && rep.pass();
    }
    if (suite == "invariants" || suite == "all") {
        qprob::SuiteReport rep = qprob::run_invariants_suite(seed, instances);
        std::cout << "invariants:\n" << qprob::format_suite(rep);
        all_pass = all_pass && rep.pass();
    }
    return all_pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-dimensional quantum probability engine"};
    app.require_subcommand(1);

    std::string path, format = "table", label, suite = "all";
    double hbar = 0.0;
    std::uint64_t trials = 100000, seed = 0;
    int instances = 50;

    CLI::App* run = app.add_subcommand("run", "evaluate every query in a scenario document");
    run->add_option("scenario", path, "path to the scenario JSON")->required();
    run->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    run->add_option("--hbar", hbar, "override the document's hbar");

    CLI::App* sample = app.add_subcommand("sample", "Monte Carlo run of one sample query");
    sample->add_option("scenario", path, "path to the scenario JSON")->required();
    sample->add_option("--query", label, "label of the query to sample")->required();
    sample->add_option("--trials", trials, "number of trials");
    sample->add_option("--seed", seed, "random seed");

    CLI::App* check = app.add_subcommand("check", "run the built-in self-check suites");
    check->add_option("--suite", suite, "which suite to run")
        ->check(CLI::IsMember({"examples", "paper", "invariants", "all"}));
    check->add_option("--seed", seed, "random seed");
    check->add_option("--instances", instances, "random instances per check");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(path, format, hbar);
        if (sample->parsed()) return cmd_sample(path, label, trials, seed);
        return cmd_check(suite, seed, instances);
    } catch (const qprob::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
