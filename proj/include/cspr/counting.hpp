#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "cspr/nucleotide.hpp"
#include "cspr/sequence.hpp"

namespace cspr {

// N_n(a,b): dinucleotide counts over n windows (n = length when circular, length - 1 when linear).
struct PairCounts {
    std::uint64_t n = 0;
    std::array<std::uint64_t, kPairCount> counts{};

    std::uint64_t operator()(Nucleotide a, Nucleotide b) const noexcept { return counts[pair_index(a, b)]; }
    double frequency(std::size_t pair) const noexcept {
        return static_cast<double>(counts[pair]) / static_cast<double>(n);
    }
    friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

// N_n^{(i)}(a,b;c,d): number of start positions j with (X_j, X_{j+1}, X_{j+i}, X_{j+i+1}) = (a,b,c,d).
// Cell (a,b;c,d) lives at 16 * pair_index(a,b) + pair_index(c,d). `n` is the normaliser of the
// matching PairCounts, not the number of quadruples counted (those differ for linear sequences).
struct LagPairCounts {
    std::size_t lag = 0;
    std::uint64_t n = 0;
    std::array<std::uint64_t, kPairCount * kPairCount> counts{};

    std::uint64_t operator()(std::size_t ab, std::size_t cd) const noexcept { return counts[kPairCount * ab + cd]; }
    friend bool operator==(const LagPairCounts&, const LagPairCounts&) = default;
};

// Index set K in its fixed report order: AA, AC, AG, CA, CC.
inline constexpr std::size_t kKSize = 5;
inline constexpr std::array<std::size_t, kKSize> kIndexSetK{
    pair_index(Nucleotide::A, Nucleotide::A), pair_index(Nucleotide::A, Nucleotide::C),
    pair_index(Nucleotide::A, Nucleotide::G), pair_index(Nucleotide::C, Nucleotide::A),
    pair_index(Nucleotide::C, Nucleotide::C)};

using FVector = std::array<double, kKSize>;

// 5x16, row-major; rows follow kIndexSetK, columns the 16 pair indices.
using LambdaMatrix = std::array<std::array<int, kPairCount>, kKSize>;

// Per-window pair code 4*X_j + X_{j+1}; the window count is length (circular) or length-1 (linear).
std::vector<std::uint8_t> pair_codes(const Sequence& s);

PairCounts count_pairs(const Sequence& s);
PairCounts count_pairs(std::span<const std::uint8_t> codes);

LagPairCounts count_lag_pairs(const Sequence& s, std::size_t lag);

// Lag counts from precomputed pair codes; repeated lags over one sequence should use this.
// Parallelised over windows with OpenMP.
LagPairCounts count_lag_pairs(std::span<const std::uint8_t> codes, std::size_t lag, Topology topology);

// The full antisymmetric 16-component vector N(a,b)/n - N(Γ(b),Γ(a))/n.
std::array<double, kPairCount> f_full(const PairCounts& pc);

FVector f_vector(const PairCounts& pc);

const LambdaMatrix& lambda_matrix();

namespace serial {

// Straight loops kept as the reference for the parallel kernels and for benchmarking.
PairCounts count_pairs(const Sequence& s);
LagPairCounts count_lag_pairs(const Sequence& s, std::size_t lag);

}  // namespace serial

}  // namespace cspr
