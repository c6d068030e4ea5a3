#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cspr/sequence.hpp"
#include "cspr/simulation.hpp"
#include "cspr/testkit.hpp"

namespace cspr {

// Plain-text `key = value` file; '#' starts a comment, blank lines are ignored.
// Duplicate keys raise ConfigError.
std::map<std::string, std::string> parse_key_value(std::istream& in);
std::map<std::string, std::string> parse_key_value(std::string_view text);

enum class ModelKind { markov, mrf };
enum class JointKind { uniform, random };
enum class EnergyKind { zero, random, tables };

// Experiment description shared by `simulate` and `power`. `effects` is the epsilon grid for
// Markov models and the energy perturbation grid for MRFs; `simulate` requires a single value.
struct ExperimentSpec {
    ModelKind model = ModelKind::markov;
    std::size_t n = 1000;
    std::size_t replicates = 1;
    std::uint64_t seed = 1;

    JointKind joint = JointKind::uniform;
    std::uint64_t joint_seed = 1;
    std::size_t pair = 0;  // pair_index of the perturbed dinucleotide, default AA

    std::size_t k = 3;
    EnergyKind energy = EnergyKind::random;
    std::uint64_t energy_seed = 1;
    double energy_scale = 0.5;
    bool symmetric = true;
    std::vector<std::vector<double>> tables;
    std::size_t sweeps = 50;

    std::vector<double> effects{0.0};

    double alpha = 0.05;
    std::size_t max_m = kDefaultMaxLag;
    double threshold_frac = kDefaultThresholdFrac;
};

ExperimentSpec parse_experiment(const std::map<std::string, std::string>& kv);
ExperimentSpec parse_experiment(std::istream& in);

// Canonical key-value form; parse_experiment(to_key_value(s)) reproduces s.
std::string to_key_value(const ExperimentSpec& spec);

// Compliant base joint for Markov experiments (symmetrised uniform or random joint).
Joint compliant_joint(const ExperimentSpec& spec);
MarkovModel markov_model(const ExperimentSpec& spec, double epsilon);

CliqueEnergy mrf_energy(const ExperimentSpec& spec, double perturbation);

// Replicate `replicate` at grid value `effect`, seeded with replicate_seed(spec.seed, replicate).
Sequence simulate_replicate(const ExperimentSpec& spec, double effect, std::size_t replicate);

struct PowerRow {
    double effect = 0.0;
    std::size_t n = 0;
    std::size_t replicates = 0;
    std::size_t rejections = 0;
    std::size_t singular = 0;
    double rate = 0.0;
    double standard_error = 0.0;
};

// Rejection rate at spec.alpha for each grid value; replicates run on `workers` OpenMP threads.
std::vector<PowerRow> run_power(const ExperimentSpec& spec, int workers = 0);

}  // namespace cspr
