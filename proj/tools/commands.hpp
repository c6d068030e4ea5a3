#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cspr/covariance.hpp"
#include "cspr/sequence.hpp"

namespace cspr::cli {

enum class OutputFormat { tsv, json };

struct RunConfig {
    double alpha = 0.01;
    bool alpha_given = false;  // power: override the config file's alpha
    std::size_t max_m = kDefaultMaxLag;
    double threshold_frac = kDefaultThresholdFrac;
    bool linear = false;
    AmbiguityPolicy ambiguity = AmbiguityPolicy::skip;
    int workers = 0;
    OutputFormat format = OutputFormat::tsv;

    // Throws DomainError when a field is out of range.
    void validate() const;
};

// Quartiles use linear interpolation between order statistics (R type 7); the standard
// deviation uses the n-1 denominator and is 0 for a single value.
struct SummaryStats {
    double first_quartile = 0.0;
    double median = 0.0;
    double third_quartile = 0.0;
    double mean = 0.0;
    double std_deviation = 0.0;
};

SummaryStats summarize(std::vector<double> values);

// Exit code 0 unless every input file failed.
int cmd_test(const std::vector<std::string>& inputs, const RunConfig& config, std::ostream& out, std::ostream& err);

int cmd_summary(const std::vector<std::string>& inputs, const RunConfig& config, std::ostream& out,
                std::ostream& err);

int cmd_simulate(const std::string& spec_path, const std::string& out_path, std::optional<std::uint64_t> seed,
                 std::ostream& err);

int cmd_power(const std::string& spec_path, const RunConfig& config, std::optional<std::uint64_t> seed,
              std::ostream& out, std::ostream& err);

}  // namespace cspr::cli
