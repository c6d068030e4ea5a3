#include "cspr/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>

#include "cspr/errors.hpp"
#include "cspr/rng.hpp"

namespace cspr {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

// Lists may be separated by whitespace, commas, or both.
std::vector<std::string> split_list(std::string s) {
    std::replace(s.begin(), s.end(), ',', ' ');
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

double to_double(const std::string& key, const std::string& text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) throw ConfigError(key, "expected a number, got '" + text + "'");
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& tok : split_list(text)) out.push_back(to_double(key, tok));
    if (out.empty()) throw ConfigError(key, "expected at least one number");
    return out;
}

std::size_t to_pair(const std::string& key, const std::string& text) {
    if (text.size() == 2) {
        auto a = from_char(text[0]);
        auto b = from_char(text[1]);
        if (a && b) return pair_index(*a, *b);
    }
    throw ConfigError(key, "expected a dinucleotide such as AA, got '" + text + "'");
}

// Shortest text that reads back to the same double.
std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

std::map<std::string, std::string> parse_key_value(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(body, "line " + std::to_string(line_no) + " is not of the form key = value");
        }
        auto key = trim(std::string_view(body).substr(0, eq));
        auto value = trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("", "empty key on line " + std::to_string(line_no));
        if (!kv.emplace(key, value).second) throw ConfigError(key, "duplicate key");
    }
    return kv;
}

std::map<std::string, std::string> parse_key_value(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_key_value(in);
}

ExperimentSpec parse_experiment(const std::map<std::string, std::string>& kv) {
    static const std::set<std::string> known{
        "model",        "n",        "replicates", "seed",  "joint", "joint_seed", "pair",      "epsilon",
        "k",            "energy",   "energy_seed", "energy_scale", "symmetric", "perturbation", "sweeps",
        "psi1",         "psi2",     "psi3",       "psi4",  "alpha", "max_m",      "threshold_frac"};
    for (const auto& [key, value] : kv) {
        if (!known.contains(key)) throw ConfigError(key, "unknown key");
    }
    auto get = [&](const std::string& key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        return it->second;
    };

    ExperimentSpec s;
    if (auto v = get("model")) {
        if (*v == "markov") s.model = ModelKind::markov;
        else if (*v == "mrf") s.model = ModelKind::mrf;
        else throw ConfigError("model", "expected markov or mrf, got '" + *v + "'");
    }
    if (auto v = get("n")) s.n = to_uint("n", *v);
    if (auto v = get("replicates")) s.replicates = to_uint("replicates", *v);
    if (auto v = get("seed")) s.seed = to_uint("seed", *v);
    if (auto v = get("alpha")) s.alpha = to_double("alpha", *v);
    if (auto v = get("max_m")) s.max_m = to_uint("max_m", *v);
    if (auto v = get("threshold_frac")) s.threshold_frac = to_double("threshold_frac", *v);

    if (s.model == ModelKind::markov) {
        for (const char* key : {"k", "energy", "energy_seed", "energy_scale", "symmetric", "perturbation", "sweeps",
                                "psi1", "psi2", "psi3", "psi4"}) {
            if (kv.contains(key)) throw ConfigError(key, "not valid for model = markov");
        }
        if (auto v = get("joint")) {
            if (*v == "uniform") s.joint = JointKind::uniform;
            else if (*v == "random") s.joint = JointKind::random;
            else throw ConfigError("joint", "expected uniform or random, got '" + *v + "'");
        }
        if (auto v = get("joint_seed")) s.joint_seed = to_uint("joint_seed", *v);
        if (auto v = get("pair")) s.pair = to_pair("pair", *v);
        if (auto v = get("epsilon")) s.effects = to_doubles("epsilon", *v);
        for (double e : s.effects) {
            if (!(e > -1.0)) throw ConfigError("epsilon", "must exceed -1");
        }
    } else {
        for (const char* key : {"joint", "joint_seed", "pair", "epsilon"}) {
            if (kv.contains(key)) throw ConfigError(key, "not valid for model = mrf");
        }
        if (auto v = get("k")) s.k = to_uint("k", *v);
        if (s.k < 1 || s.k > 4) throw ConfigError("k", "must be in [1, 4]");
        if (auto v = get("energy")) {
            if (*v == "zero") s.energy = EnergyKind::zero;
            else if (*v == "random") s.energy = EnergyKind::random;
            else if (*v == "tables") s.energy = EnergyKind::tables;
            else throw ConfigError("energy", "expected zero, random or tables, got '" + *v + "'");
        }
        if (auto v = get("energy_seed")) s.energy_seed = to_uint("energy_seed", *v);
        if (auto v = get("energy_scale")) s.energy_scale = to_double("energy_scale", *v);
        if (auto v = get("symmetric")) s.symmetric = to_bool("symmetric", *v);
        if (auto v = get("sweeps")) s.sweeps = to_uint("sweeps", *v);
        if (s.sweeps < 1) throw ConfigError("sweeps", "must be >= 1");
        if (auto v = get("perturbation")) s.effects = to_doubles("perturbation", *v);
        for (std::size_t j = 1; j <= 4; ++j) {
            const std::string key = "psi" + std::to_string(j);
            auto v = get(key);
            if (s.energy != EnergyKind::tables) {
                if (v) throw ConfigError(key, "only valid with energy = tables");
                continue;
            }
            if (j > s.k) {
                if (v) throw ConfigError(key, "exceeds clique size k");
                continue;
            }
            if (!v) throw ConfigError(key, "required with energy = tables");
            auto table = to_doubles(key, *v);
            if (table.size() != (std::size_t{1} << (2 * j))) {
                throw ConfigError(key, "needs " + std::to_string(std::size_t{1} << (2 * j)) + " values");
            }
            s.tables.push_back(std::move(table));
        }
    }
    if (s.n < 2) throw ConfigError("n", "must be >= 2");
    if (!(s.alpha > 0.0 && s.alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
    if (s.max_m < 1) throw ConfigError("max_m", "must be >= 1");
    if (!(s.threshold_frac > 0.0)) throw ConfigError("threshold_frac", "must be > 0");
    return s;
}

ExperimentSpec parse_experiment(std::istream& in) { return parse_experiment(parse_key_value(in)); }

std::string to_key_value(const ExperimentSpec& s) {
    std::ostringstream out;
    auto list = [](const std::vector<double>& v) {
        std::string text;
        for (std::size_t i = 0; i < v.size(); ++i) text += (i ? " " : "") + format_double(v[i]);
        return text;
    };
    out << "model = " << (s.model == ModelKind::markov ? "markov" : "mrf") << '\n';
    out << "n = " << s.n << '\n';
    out << "replicates = " << s.replicates << '\n';
    out << "seed = " << s.seed << '\n';
    out << "alpha = " << format_double(s.alpha) << '\n';
    out << "max_m = " << s.max_m << '\n';
    out << "threshold_frac = " << format_double(s.threshold_frac) << '\n';
    if (s.model == ModelKind::markov) {
        out << "joint = " << (s.joint == JointKind::uniform ? "uniform" : "random") << '\n';
        out << "joint_seed = " << s.joint_seed << '\n';
        out << "pair = " << to_char(pair_first(s.pair)) << to_char(pair_second(s.pair)) << '\n';
        out << "epsilon = " << list(s.effects) << '\n';
    } else {
        out << "k = " << s.k << '\n';
        const char* energy = s.energy == EnergyKind::zero ? "zero" : s.energy == EnergyKind::random ? "random" : "tables";
        out << "energy = " << energy << '\n';
        out << "energy_seed = " << s.energy_seed << '\n';
        out << "energy_scale = " << format_double(s.energy_scale) << '\n';
        out << "symmetric = " << (s.symmetric ? "true" : "false") << '\n';
        out << "sweeps = " << s.sweeps << '\n';
        out << "perturbation = " << list(s.effects) << '\n';
        for (std::size_t j = 0; j < s.tables.size(); ++j) out << "psi" << j + 1 << " = " << list(s.tables[j]) << '\n';
    }
    return out.str();
}

Joint compliant_joint(const ExperimentSpec& spec) {
    Joint base{};
    if (spec.joint == JointKind::uniform) base.fill(1.0 / 16.0);
    else base = random_joint(spec.joint_seed);
    return stationary_joint(symmetrize_joint(base).P);
}

MarkovModel markov_model(const ExperimentSpec& spec, double epsilon) {
    const Joint q = compliant_joint(spec);
    if (epsilon == 0.0) return symmetrize_joint(q);
    return perturb_joint(q, spec.pair, epsilon);
}

CliqueEnergy mrf_energy(const ExperimentSpec& spec, double perturbation) {
    CliqueEnergy e;
    switch (spec.energy) {
        case EnergyKind::zero: e = CliqueEnergy::zero(spec.k); break;
        case EnergyKind::random: e = random_energy(spec.k, spec.energy_scale, spec.energy_seed); break;
        case EnergyKind::tables: e = CliqueEnergy(spec.tables); break;
    }
    if (spec.symmetric) e = symmetrize_energy(e);
    if (perturbation != 0.0) e = perturb_energy(e, perturbation);
    return e;
}

namespace {

std::string replicate_id(const ExperimentSpec& spec, double effect, std::size_t replicate) {
    const char* model = spec.model == ModelKind::markov ? "markov" : "mrf";
    const char* effect_name = spec.model == ModelKind::markov ? "eps" : "pert";
    return std::string(model) + (spec.model == ModelKind::mrf ? "_k" + std::to_string(spec.k) : "") + "_" +
           effect_name + format_double(effect) + "_seed" + std::to_string(spec.seed) + "_rep" +
           std::to_string(replicate);
}

}  // namespace

Sequence simulate_replicate(const ExperimentSpec& spec, double effect, std::size_t replicate) {
    const auto seed = replicate_seed(spec.seed, replicate);
    Sequence s = spec.model == ModelKind::markov
                     ? sample_markov(markov_model(spec, effect), spec.n, seed)
                     : gibbs_sample_mrf(mrf_energy(spec, effect), spec.n, spec.sweeps, seed);
    return Sequence(replicate_id(spec, effect, replicate),
                    std::vector<Nucleotide>(s.bases().begin(), s.bases().end()), Topology::circular);
}

std::vector<PowerRow> run_power(const ExperimentSpec& spec, int workers) {
    std::vector<PowerRow> rows;
    if (spec.replicates == 0) return rows;
    if (spec.n < kMinTestLength) throw ConfigError("n", "must be >= " + std::to_string(kMinTestLength) + " for testing");
    TestConfig config;
    config.alpha = spec.alpha;
    config.max_m = spec.max_m;
    config.threshold_frac = spec.threshold_frac;
    const int threads = workers > 0 ? workers : omp_get_max_threads();

    for (double effect : spec.effects) {
        std::optional<MarkovModel> chain;
        std::optional<GibbsSampler> sampler;
        if (spec.model == ModelKind::markov) chain = markov_model(spec, effect);
        else sampler.emplace(mrf_energy(spec, effect));

        std::vector<int> outcome(spec.replicates, 0);  // 1 reject, 2 singular
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (threads > 1)
        for (std::int64_t r = 0; r < static_cast<std::int64_t>(spec.replicates); ++r) {
            const auto seed = replicate_seed(spec.seed, static_cast<std::uint64_t>(r));
            const Sequence s = chain ? sample_markov(*chain, spec.n, seed) : sampler->sample(spec.n, spec.sweeps, seed);
            const auto report = run_test(s, config);
            if (report.status == TestStatus::singular_covariance) outcome[r] = 2;
            else if (report.rejects_at(spec.alpha)) outcome[r] = 1;
        }

        PowerRow row;
        row.effect = effect;
        row.n = spec.n;
        row.replicates = spec.replicates;
        for (int o : outcome) {
            row.rejections += o == 1;
            row.singular += o == 2;
        }
        row.rate = static_cast<double>(row.rejections) / static_cast<double>(row.replicates);
        row.standard_error = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(row.replicates));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace cspr
