#include "cspr/testkit.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>

#include "cspr/errors.hpp"
#include "cspr/numerics.hpp"

namespace cspr {

const char* to_string(TestStatus s) noexcept {
    switch (s) {
        case TestStatus::ok: return "ok";
        case TestStatus::singular_covariance: return "singular-covariance";
    }
    return "unknown";
}

double eta_statistic(const FVector& f, const VEstimate& v, std::uint64_t n) {
    const Vector5 x = solve_spd(v.matrix, f);
    double q = 0.0;
    for (std::size_t k = 0; k < kKSize; ++k) q += f[k] * x[k];
    // The quadratic form of an SPD matrix is non-negative; clamp roundoff.
    return std::max(0.0, static_cast<double>(n) * q);
}

TestReport run_test(const Sequence& s, const TestConfig& config) {
    if (s.size() < config.min_length) {
        throw DomainError("sequence '" + s.id() + "' has length " + std::to_string(s.size()) +
                          ", below the minimum of " + std::to_string(config.min_length) + " for testing");
    }
    TestReport r;
    r.id = s.id();
    r.gc = gc_content(s);
    r.skipped_positions = s.skipped_positions();

    const auto pc = count_pairs(s);
    r.n = pc.n;
    r.f = f_vector(pc);

    const auto sigma = sigma_hat_adaptive(s, config.max_m, config.threshold_frac);
    r.m_used = sigma.m_used;
    r.truncated_at_cap = sigma.truncated_at_cap;
    const auto v = v_hat(sigma);
    try {
        const double eta = eta_statistic(r.f, v, r.n);
        r.eta = eta;
        r.p_value = chi2_sf(eta, static_cast<double>(kDegreesOfFreedom));
        r.status = TestStatus::ok;
    } catch (const NotPositiveDefinite&) {
        r.status = TestStatus::singular_covariance;
    }
    return r;
}

std::vector<bool> holm_bonferroni(std::span<const std::optional<double>> p_values, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < p_values.size(); ++i) {
        if (p_values[i]) {
            if (!(*p_values[i] >= 0.0 && *p_values[i] <= 1.0)) throw DomainError("p-value outside [0, 1]");
            order.push_back(i);
        }
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return *p_values[a] < *p_values[b]; });

    std::vector<bool> reject(p_values.size(), false);
    const std::size_t family = order.size();
    for (std::size_t rank = 0; rank < family; ++rank) {
        const double threshold = alpha / static_cast<double>(family - rank);
        if (*p_values[order[rank]] > threshold) break;
        reject[order[rank]] = true;
    }
    return reject;
}

std::vector<bool> holm_bonferroni(std::span<const double> p_values, double alpha) {
    std::vector<std::optional<double>> wrapped(p_values.begin(), p_values.end());
    return holm_bonferroni(std::span<const std::optional<double>>(wrapped), alpha);
}

BatchDecision decide_batch(std::vector<TestReport> reports, double alpha) {
    std::vector<std::optional<double>> p;
    p.reserve(reports.size());
    for (const auto& r : reports) p.push_back(r.p_value);
    BatchDecision d;
    d.alpha = alpha;
    d.adjusted_reject = holm_bonferroni(std::span<const std::optional<double>>(p), alpha);
    d.reports = std::move(reports);
    return d;
}

std::vector<BatchItem> run_batch(std::span<const Sequence> sequences, const TestConfig& config, int workers) {
    std::vector<BatchItem> out(sequences.size());
    const int threads = workers > 0 ? workers : omp_get_max_threads();
    // Each record's kernels run single-threaded inside the pool so threads are not oversubscribed.
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(sequences.size()); ++i) {
        try {
            out[i].report = run_test(sequences[i], config);
        } catch (const std::exception& e) {
            out[i].error = e.what();
        }
    }
    return out;
}

}  // namespace cspr
