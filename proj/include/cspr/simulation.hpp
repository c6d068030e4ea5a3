#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "cspr/nucleotide.hpp"
#include "cspr/rng.hpp"
#include "cspr/sequence.hpp"

namespace cspr {

// Joint distribution over the 16 dinucleotides, indexed by pair_index.
using Joint = std::array<double, kPairCount>;
using Transition = std::array<double, kPairCount>;  // row-major 4x4

struct MarkovModel {
    std::array<double, kAlphabetSize> pi{};
    Transition P{};
    bool compliant = false;

    // Throws DomainError unless pi is a distribution and every row of P is (within 1e-12).
    void validate() const;
};

std::array<double, kAlphabetSize> stationary_distribution(const Transition& P);

// q(a,b) = pi*(a) P(a,b) with pi* the stationary distribution of P.
Joint stationary_joint(const Transition& P);

// Averages q with its reverse complement and returns the chain whose stationary joint it is.
// Requires a positive distribution with matching row/column marginals.
MarkovModel symmetrize_joint(const Joint& q);

// Stationary joint of a random chain with transition entries drawn from [0.5, 1.5) before
// normalisation. Has matching marginals, so it is a valid symmetrize_joint input.
Joint random_joint(std::uint64_t seed);

// Multiplies q(pair) by (1 + epsilon), renormalises, and builds a chain from the rows of the
// result started at its own stationary distribution. Declared non-compliant when epsilon != 0.
MarkovModel perturb_joint(const Joint& q, std::size_t pair, double epsilon);

Sequence sample_markov(const MarkovModel& model, std::size_t n, std::uint64_t seed);

// Clique potentials psi^(j), j = 1..k, over windows of j adjacent sites. Table j has 4^j entries
// indexed by the base-4 number x_0 x_1 ... x_{j-1} (first base most significant).
class CliqueEnergy {
public:
    CliqueEnergy() = default;
    // tables[j-1] must have 4^j finite entries; 1 <= k <= 4.
    explicit CliqueEnergy(std::vector<std::vector<double>> tables);

    static CliqueEnergy zero(std::size_t k);

    std::size_t k() const noexcept { return tables_.size(); }
    const std::vector<double>& table(std::size_t j) const { return tables_.at(j - 1); }
    std::vector<double>& table(std::size_t j) { return tables_.at(j - 1); }
    const std::vector<std::vector<double>>& tables() const noexcept { return tables_; }

    friend bool operator==(const CliqueEnergy&, const CliqueEnergy&) = default;

private:
    std::vector<std::vector<double>> tables_;
};

// Index of the Γ-reversed word (Γ(w_{j-1}), ..., Γ(w_0)) of a j-letter word index.
std::size_t reverse_complement_word(std::size_t word, std::size_t j) noexcept;

bool is_energy_symmetric(const CliqueEnergy& e);

CliqueEnergy symmetrize_energy(const CliqueEnergy& e);

// Entries i.i.d. uniform on [-scale, scale).
CliqueEnergy random_energy(std::size_t k, double scale, std::uint64_t seed);

// Adds `magnitude` to psi^(k)(A...A) only, which breaks Γ-reversal invariance when magnitude != 0.
CliqueEnergy perturb_energy(const CliqueEnergy& e, double magnitude);

// Systematic-scan heat-bath Gibbs sampler on a circle of n sites with weight exp(+sum psi).
// Conditional tables are precomputed once per energy.
class GibbsSampler {
public:
    explicit GibbsSampler(CliqueEnergy energy);

    // Initial state i.i.d. uniform, then `sweeps` passes over sites 0..n-1.
    Sequence sample(std::size_t n, std::size_t sweeps, std::uint64_t seed) const;

    const CliqueEnergy& energy() const noexcept { return energy_; }

private:
    template <std::size_t K>
    void sweep_fast(std::vector<std::uint8_t>& x, Rng& rng) const;
    void sweep_exact(std::vector<std::uint8_t>& x, Rng& rng) const;
    double local_energy(const std::vector<std::uint8_t>& x, std::size_t site) const;

    CliqueEnergy energy_;
    std::size_t k_ = 1;
    // Per neighbour context (2(k-1) bases, left block then right block), cumulative
    // probabilities of the four candidate bases.
    std::vector<std::array<double, 4>> cumulative_;
};

Sequence gibbs_sample_mrf(const CliqueEnergy& e, std::size_t n, std::size_t sweeps, std::uint64_t seed);

// Entry k-1 holds max_w |freq(w) - freq(Γ-reverse(w))| over all 4^k words, circular windows.
std::vector<double> kmer_parity_report(const Sequence& s, std::size_t k_max);

}  // namespace cspr
