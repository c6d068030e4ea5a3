#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cspr/counting.hpp"
#include "cspr/covariance.hpp"
#include "cspr/sequence.hpp"

namespace cspr {

inline constexpr std::size_t kDegreesOfFreedom = 5;
inline constexpr std::size_t kMinTestLength = 100;

struct TestConfig {
    double alpha = 0.01;
    std::size_t max_m = kDefaultMaxLag;
    double threshold_frac = kDefaultThresholdFrac;
    std::size_t min_length = kMinTestLength;
};

enum class TestStatus { ok, singular_covariance };

const char* to_string(TestStatus s) noexcept;

struct TestReport {
    std::string id;
    std::uint64_t n = 0;
    std::optional<double> eta;
    std::optional<double> p_value;
    std::size_t m_used = 0;
    bool truncated_at_cap = false;
    TestStatus status = TestStatus::ok;
    double gc = 0.0;
    std::size_t skipped_positions = 0;
    FVector f{};

    // Unadjusted decision p <= alpha; false when no p-value exists.
    bool rejects_at(double alpha) const noexcept { return p_value && *p_value <= alpha; }
};

// n f' V^{-1} f. Propagates NotPositiveDefinite.
double eta_statistic(const FVector& f, const VEstimate& v, std::uint64_t n);

// Full pipeline for one sequence. Sequences shorter than config.min_length raise DomainError;
// a singular V is reported through TestReport::status.
TestReport run_test(const Sequence& s, const TestConfig& config = {});

// Classical step-down Holm procedure. Missing p-values are left out of the family size
// and never rejected. Flags come back in input order.
std::vector<bool> holm_bonferroni(std::span<const std::optional<double>> p_values, double alpha);
std::vector<bool> holm_bonferroni(std::span<const double> p_values, double alpha);

struct BatchDecision {
    double alpha = 0.01;
    std::vector<TestReport> reports;
    std::vector<bool> adjusted_reject;
};

// Applies Holm-Bonferroni across all reports (the synchronisation point of a batch).
BatchDecision decide_batch(std::vector<TestReport> reports, double alpha);

// Runs run_test over `sequences` on up to `workers` OpenMP threads (0 = runtime default) and
// collates in input order. Per-sequence failures are returned as error strings.
struct BatchItem {
    std::optional<TestReport> report;
    std::string error;
};
std::vector<BatchItem> run_batch(std::span<const Sequence> sequences, const TestConfig& config,
                                 int workers = 0);

}  // namespace cspr
