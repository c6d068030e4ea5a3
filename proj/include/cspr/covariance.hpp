#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>

#include "cspr/counting.hpp"
#include "cspr/numerics.hpp"
#include "cspr/sequence.hpp"

namespace cspr {

inline constexpr std::size_t kDefaultMaxLag = 1000;
inline constexpr double kDefaultThresholdFrac = 0.01;

// Truncated long-run covariance of the 16 dinucleotide indicators.
struct SigmaEstimate {
    SymMatrix16 matrix;
    std::size_t m_used = 0;
    bool truncated_at_cap = false;
    std::uint64_t n = 0;
};

// 5x5 covariance over the index set K, derived from a SigmaEstimate.
struct VEstimate {
    SymMatrix5 matrix;
    std::size_t m_used = 0;
    bool truncated_at_cap = false;
};

struct LagSelection {
    std::size_t m = 1;
    bool truncated_at_cap = false;
};

// Whether lag counts at lag i satisfy, for every pair ab,
//   |N^(i)(ab;ab)/n - p(ab)^2| <= threshold_frac * (p(ab) - p(ab)^2).
bool lag_is_negligible(const PairCounts& pc, const LagPairCounts& lag, double threshold_frac);

// Smallest lag in [1, min(max_m, length-2)] passing lag_is_negligible; the cap (flagged) otherwise.
LagSelection select_m(const Sequence& s, std::size_t max_m = kDefaultMaxLag,
                      double threshold_frac = kDefaultThresholdFrac);

// Sigma_hat_{n,m} for a fixed truncation lag m (0 <= m <= length-2).
SigmaEstimate sigma_hat(const Sequence& s, std::size_t m);

// select_m and sigma_hat fused: each lag is counted once and reused for both the
// stopping rule and the covariance sum.
SigmaEstimate sigma_hat_adaptive(const Sequence& s, std::size_t max_m = kDefaultMaxLag,
                                 double threshold_frac = kDefaultThresholdFrac);

// Incremental builder behind sigma_hat: lag 0 is implied by the pair counts, lags 1..m are added in order.
class SigmaAccumulator {
public:
    explicit SigmaAccumulator(const PairCounts& pc);

    // Adds lag counts for lag m_used()+1.
    void add_lag(const LagPairCounts& lag);

    std::size_t m_used() const noexcept { return m_; }

    SigmaEstimate estimate() const;

    // Unsymmetrized matrix, exposed for symmetry checks.
    std::array<double, kPairCount * kPairCount> raw() const;

private:
    PairCounts pairs_;
    std::size_t m_ = 0;
    // Sum over added lags of N^(i)(ab;cd).
    std::array<std::uint64_t, kPairCount * kPairCount> lag_sum_{};
};

// Four-term formula over K x K, then symmetrized.
VEstimate v_hat(const SigmaEstimate& sigma);

}  // namespace cspr
