#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using cspr::cli::OutputFormat;
using cspr::cli::RunConfig;

const std::map<std::string, OutputFormat> kFormats{{"tsv", OutputFormat::tsv}, {"json", OutputFormat::json}};
const std::map<std::string, cspr::AmbiguityPolicy> kAmbiguity{{"skip", cspr::AmbiguityPolicy::skip},
                                                               {"error", cspr::AmbiguityPolicy::error}};

void add_format(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--format", cfg.format, "Output format: tsv or json")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case))
        ->envname("CSPR_FORMAT");
}

void add_workers(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--workers", cfg.workers, "Worker threads (0 = all available)")
        ->check(CLI::NonNegativeNumber)
        ->envname("CSPR_WORKERS");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dinucleotide Chargaff second-parity test under a Gibbsian stationarity assumption"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> inputs;
    std::string spec_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;

    auto* test = app.add_subcommand("test", "Test FASTA records for dinucleotide parity");
    test->add_option("inputs", inputs, "FASTA files")->required();
    test->add_option("--alpha", cfg.alpha, "Significance level")->envname("CSPR_ALPHA");
    test->add_option("--max-m", cfg.max_m, "Cap on the covariance truncation lag")->envname("CSPR_MAX_M");
    test->add_option("--threshold-frac", cfg.threshold_frac, "Lag selection threshold as a fraction of the variance")
        ->envname("CSPR_THRESHOLD_FRAC");
    test->add_flag("--linear", cfg.linear, "Treat records as linear instead of circular")->envname("CSPR_LINEAR");
    test->add_option("--ambiguity", cfg.ambiguity, "Non-ACGT handling: skip or error")
        ->transform(CLI::CheckedTransformer(kAmbiguity, CLI::ignore_case))
        ->envname("CSPR_AMBIGUITY");
    add_format(test, cfg);
    add_workers(test, cfg);

    auto* summary = app.add_subcommand("summary", "Length and GC-content summary statistics");
    summary->add_option("inputs", inputs, "FASTA files")->required();
    summary->add_option("--ambiguity", cfg.ambiguity, "Non-ACGT handling: skip or error")
        ->transform(CLI::CheckedTransformer(kAmbiguity, CLI::ignore_case))
        ->envname("CSPR_AMBIGUITY");
    add_format(summary, cfg);

    auto* simulate = app.add_subcommand("simulate", "Write simulated sequences to FASTA");
    simulate->add_option("spec", spec_path, "Experiment config (key = value)")->required();
    simulate->add_option("--out", out_path, "Output FASTA path")->required()->envname("CSPR_OUT");
    simulate->add_option("--seed", seed, "Override the config seed")->envname("CSPR_SEED");

    auto* power = app.add_subcommand("power", "Rejection rates over an effect-size grid");
    power->add_option("spec", spec_path, "Experiment config (key = value)")->required();
    auto* power_alpha = power->add_option("--alpha", cfg.alpha, "Override the config alpha")->envname("CSPR_ALPHA");
    power->add_option("--seed", seed, "Override the config seed")->envname("CSPR_SEED");
    add_format(power, cfg);
    add_workers(power, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*test) return cspr::cli::cmd_test(inputs, cfg, std::cout, std::cerr);
        if (*summary) return cspr::cli::cmd_summary(inputs, cfg, std::cout, std::cerr);
        if (*simulate) return cspr::cli::cmd_simulate(spec_path, out_path, seed, std::cerr);
        if (*power) {
            cfg.alpha_given = power_alpha->count() > 0;
            return cspr::cli::cmd_power(spec_path, cfg, seed, std::cout, std::cerr);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
