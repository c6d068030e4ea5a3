#include "cspr/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cspr/errors.hpp"

namespace cspr {

bool lag_is_negligible(const PairCounts& pc, const LagPairCounts& lag, double threshold_frac) {
    const double n = static_cast<double>(pc.n);
    for (std::size_t ab = 0; ab < kPairCount; ++ab) {
        const double p = static_cast<double>(pc.counts[ab]) / n;
        const double var = p - p * p;
        const double autocov = std::abs(static_cast<double>(lag(ab, ab)) / n - p * p);
        // var == 0 means p is 0 or 1; then autocov is exactly 0 and the bound must not become inf * 0.
        const double bound = var == 0.0 ? 0.0 : threshold_frac * var;
        if (!(autocov <= bound)) return false;
    }
    return true;
}

namespace {

void require_lag_sequence(const Sequence& s, std::size_t min_length) {
    if (s.size() < min_length) {
        throw DomainError("covariance estimation needs length >= " + std::to_string(min_length) +
                          ", got " + std::to_string(s.size()));
    }
}

std::size_t effective_cap(const Sequence& s, std::size_t max_m) {
    if (max_m < 1) throw DomainError("max_m must be >= 1");
    return std::min(max_m, s.size() - 2);
}

void require_threshold(double threshold_frac) {
    if (!(threshold_frac > 0.0)) throw DomainError("threshold_frac must be > 0");
}

}  // namespace

LagSelection select_m(const Sequence& s, std::size_t max_m, double threshold_frac) {
    require_lag_sequence(s, 4);
    require_threshold(threshold_frac);
    const std::size_t cap = effective_cap(s, max_m);
    const auto codes = pair_codes(s);
    const auto pc = count_pairs(codes);
    for (std::size_t i = 1; i <= cap; ++i) {
        if (lag_is_negligible(pc, count_lag_pairs(codes, i, s.topology()), threshold_frac)) {
            return {i, false};
        }
    }
    return {cap, true};
}

SigmaAccumulator::SigmaAccumulator(const PairCounts& pc) : pairs_(pc) {
    if (pc.n == 0) throw DomainError("SigmaAccumulator needs n >= 1");
}

void SigmaAccumulator::add_lag(const LagPairCounts& lag) {
    if (lag.lag != m_ + 1) {
        throw DomainError("lags must be added in order: expected " + std::to_string(m_ + 1) + ", got " +
                          std::to_string(lag.lag));
    }
    for (std::size_t k = 0; k < lag_sum_.size(); ++k) lag_sum_[k] += lag.counts[k];
    ++m_;
}

std::array<double, kPairCount * kPairCount> SigmaAccumulator::raw() const {
    const double n = static_cast<double>(pairs_.n);
    std::array<double, kPairCount> p{};
    for (std::size_t ab = 0; ab < kPairCount; ++ab) p[ab] = static_cast<double>(pairs_.counts[ab]) / n;

    // N^(0)(ab;cd) is N(ab) on the diagonal and 0 elsewhere; the 1 + 2m product terms collapse.
    const double product_terms = 1.0 + 2.0 * static_cast<double>(m_);
    std::array<double, kPairCount * kPairCount> out{};
    for (std::size_t ab = 0; ab < kPairCount; ++ab) {
        for (std::size_t cd = 0; cd < kPairCount; ++cd) {
            const std::uint64_t lag0 = ab == cd ? pairs_.counts[ab] : 0;
            const std::uint64_t joint = lag0 + lag_sum_[kPairCount * ab + cd] + lag_sum_[kPairCount * cd + ab];
            out[kPairCount * ab + cd] = static_cast<double>(joint) / n - product_terms * p[ab] * p[cd];
        }
    }
    return out;
}

SigmaEstimate SigmaAccumulator::estimate() const {
    SigmaEstimate est;
    est.matrix = SymMatrix16::from_square(raw());
    est.m_used = m_;
    est.n = pairs_.n;
    return est;
}

SigmaEstimate sigma_hat(const Sequence& s, std::size_t m) {
    require_lag_sequence(s, 2);
    if (m > s.size() - 2) {
        throw DomainError("truncation lag " + std::to_string(m) + " out of range [0, " +
                          std::to_string(s.size() - 2) + "]");
    }
    const auto codes = pair_codes(s);
    const auto pc = count_pairs(codes);
    SigmaAccumulator acc(pc);
    for (std::size_t i = 1; i <= m; ++i) acc.add_lag(count_lag_pairs(codes, i, s.topology()));
    return acc.estimate();
}

SigmaEstimate sigma_hat_adaptive(const Sequence& s, std::size_t max_m, double threshold_frac) {
    require_lag_sequence(s, 4);
    require_threshold(threshold_frac);
    const std::size_t cap = effective_cap(s, max_m);
    const auto codes = pair_codes(s);
    const auto pc = count_pairs(codes);

    SigmaAccumulator acc(pc);
    bool selected = false;
    for (std::size_t i = 1; i <= cap; ++i) {
        const auto lag = count_lag_pairs(codes, i, s.topology());
        acc.add_lag(lag);
        if (lag_is_negligible(pc, lag, threshold_frac)) {
            selected = true;
            break;
        }
    }
    auto est = acc.estimate();
    est.truncated_at_cap = !selected;
    return est;
}

VEstimate v_hat(const SigmaEstimate& sigma) {
    const auto& m = sigma.matrix;
    std::array<double, kKSize * kKSize> raw{};
    for (std::size_t r = 0; r < kKSize; ++r) {
        const auto ab = kIndexSetK[r];
        const auto ab_rc = reverse_complement_pair(ab);
        for (std::size_t c = 0; c < kKSize; ++c) {
            const auto cd = kIndexSetK[c];
            const auto cd_rc = reverse_complement_pair(cd);
            raw[r * kKSize + c] = m(ab, cd) + m(ab_rc, cd_rc) - m(ab_rc, cd) - m(ab, cd_rc);
        }
    }
    VEstimate v;
    v.matrix = SymMatrix5::from_square(raw);
    v.m_used = sigma.m_used;
    v.truncated_at_cap = sigma.truncated_at_cap;
    return v;
}

}  // namespace cspr
