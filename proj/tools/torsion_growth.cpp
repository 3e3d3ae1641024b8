#include "torsion/experiment.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

namespace {

enum Exit { kOk = 0, kInvalid = 1, kViolation = 2, kBudget = 3, kFailure = 4 };

std::size_t budget_from_env() {
    const char* v = std::getenv("TORSION_BIGNUM_BUDGET_BITS");
    if (!v || !*v) return torsion::kDefaultBudgetBits;
    char* end = nullptr;
    const unsigned long long bits = std::strtoull(v, &end, 10);
    if (*end || bits == 0) throw torsion::InvalidArgument("TORSION_BIGNUM_BUDGET_BITS must be a positive integer");
    return static_cast<std::size_t>(bits);
}

int print_diagnostics(const std::vector<std::string>& diags) {
    for (const auto& d : diags) std::cerr << "config: " << d << '\n';
    return diags.empty() ? kOk : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Torsion growth of integral homology along subgroup chains"};
    app.require_subcommand(1);

    std::string run_config, validate_config, out_dir;
    std::size_t jobs = 1;
    std::optional<std::uint64_t> seed;
    auto* run = app.add_subcommand("run", "Run the pipelines of a config and write CSV/JSON artifacts");
    run->add_option("--config", run_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--jobs", jobs, "Worker threads for levels")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Overrides the config seed");
    run->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    auto* val = app.add_subcommand("validate", "List every problem with a config");
    val->add_option("--config", validate_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*val) return print_diagnostics(torsion::validate(torsion::load_config(validate_config)));

        torsion::ExperimentConfig config = torsion::load_config(run_config);
        config.budget_bits = budget_from_env();
        if (int rc = print_diagnostics(torsion::validate(config)); rc != kOk) return rc;
        const auto out = torsion::run_experiment(config, {jobs, seed});
        const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(config.out_dir) : std::filesystem::path(out_dir);
        for (const auto& p : torsion::write_artifacts(out, config, dir)) std::cout << p.string() << '\n';
        return kOk;
    } catch (const torsion::InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << '\n';
        return kViolation;
    } catch (const torsion::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << '\n';
        return kBudget;
    } catch (const torsion::InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
}
