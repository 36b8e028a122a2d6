// Command-line front end: run scenarios, check acceptance criteria, emit
// reference tables, validate configs.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "csf/acceptance.hpp"
#include "csf/csf.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw csf::Error(csf::ErrorKind::IoError, "cannot read " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int cmd_run(const std::string& config, const std::string& out_dir, std::optional<std::uint64_t> seed, double tol) {
    csf::Scenario sc = csf::parse_scenario(read_file(config));
    if (seed) sc.seed = *seed;
    auto t0 = std::chrono::steady_clock::now();
    csf::ScenarioRun run = csf::run_scenario(sc, {out_dir, tol});
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& s = run.summary;
    std::cout << "scenario " << s.scenario << ": stop " << csf::to_string(s.stop_reason) << ", T_est " << s.T_est
              << ", steps " << s.steps << ", " << secs << " s\n";
    if (s.aborted) std::cout << "  aborted: " << *s.aborted << "\n";
    if (s.tip) std::cout << "  tip verdict: " << csf::to_string(s.tip->verdict) << "\n";
    for (const auto& c : s.checks)
        std::cout << "  " << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << " = " << c.value
                  << (c.note.empty() ? "" : " (" + c.note + ")") << "\n";
    std::cout << "outputs in " << out_dir << "\n";
    return s.passed() ? 0 : 1;
}

int cmd_check(std::uint64_t seed, double tol) {
    csf::acceptance::Suite suite(tol, seed);
    auto results = suite.run_all(&std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::cout << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}

int cmd_describe(const std::string& config) {
    csf::Scenario sc = csf::parse_scenario(read_file(config));
    csf::validate(sc);
    std::cout << csf::emit_scenario(sc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Curve shortening flow lab"};
    app.require_subcommand(1);
    std::string out_dir = "out";
    std::uint64_t seed_value = 1;
    double tol = 1.0;
    app.add_option("--out-dir", out_dir, "Directory for CSV/JSON outputs");
    auto* seed_opt = app.add_option("--seed", seed_value, "Seed for randomized sampling");
    app.add_option("--tolerance-scale", tol, "Multiplier applied to every check tolerance")->check(CLI::PositiveNumber);

    std::string config;
    auto* run = app.add_subcommand("run", "Run a scenario and write diagnostics");
    run->add_option("config", config, "Scenario file")->required();
    auto* check = app.add_subcommand("check", "Run the acceptance criteria");
    auto* oracle = app.add_subcommand("oracle", "Write closed-form reference tables");
    auto* describe = app.add_subcommand("describe", "Validate a scenario and print it with defaults filled in");
    describe->add_option("config", config, "Scenario file")->required();
    app.fallthrough();

    CLI11_PARSE(app, argc, argv);
    std::optional<std::uint64_t> seed;
    if (seed_opt->count()) seed = seed_value;
    try {
        if (*run) return cmd_run(config, out_dir, seed, tol);
        if (*check) return cmd_check(seed.value_or(1), tol);
        if (*oracle) {
            csf::emit_reference_tables(out_dir);
            std::cout << "reference tables written to " << out_dir << "\n";
            return 0;
        }
        if (*describe) return cmd_describe(config);
    } catch (const csf::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
