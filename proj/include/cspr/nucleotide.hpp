#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace cspr {

// 2-bit code; complement is 3 - code, so A<->T and C<->G.
enum class Nucleotide : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr std::size_t kAlphabetSize = 4;
inline constexpr std::size_t kPairCount = 16;  // |A^2|
inline constexpr std::array<Nucleotide, 4> kAlphabet{Nucleotide::A, Nucleotide::C,
                                                     Nucleotide::G, Nucleotide::T};

constexpr std::uint8_t code(Nucleotide b) noexcept { return static_cast<std::uint8_t>(b); }

constexpr Nucleotide from_code(std::uint8_t c) noexcept { return static_cast<Nucleotide>(c & 3u); }

constexpr Nucleotide complement(Nucleotide b) noexcept {
    return static_cast<Nucleotide>(3u - code(b));
}

constexpr char to_char(Nucleotide b) noexcept { return "ACGT"[code(b)]; }

constexpr std::optional<Nucleotide> from_char(char c) noexcept {
    switch (c) {
        case 'A': case 'a': return Nucleotide::A;
        case 'C': case 'c': return Nucleotide::C;
        case 'G': case 'g': return Nucleotide::G;
        case 'T': case 't': return Nucleotide::T;
        default: return std::nullopt;
    }
}

// Dinucleotide (a,b) is indexed as 4a + b, lexicographic AA, AC, ..., TT.
constexpr std::size_t pair_index(Nucleotide a, Nucleotide b) noexcept {
    return 4u * code(a) + code(b);
}

constexpr Nucleotide pair_first(std::size_t idx) noexcept { return from_code(static_cast<std::uint8_t>(idx >> 2)); }
constexpr Nucleotide pair_second(std::size_t idx) noexcept { return from_code(static_cast<std::uint8_t>(idx)); }

// Index of the reverse complement (Γ(b), Γ(a)) of pair index (a,b).
constexpr std::size_t reverse_complement_pair(std::size_t idx) noexcept {
    return pair_index(complement(pair_second(idx)), complement(pair_first(idx)));
}

}  // namespace cspr
