// Binary acceptance suite. Prints one [PASS]/[FAIL] line per criterion and exits non-zero if any
// criterion fails. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "cspr/counting.hpp"
#include "cspr/covariance.hpp"
#include "cspr/numerics.hpp"
#include "cspr/rng.hpp"
#include "cspr/simulation.hpp"
#include "cspr/testkit.hpp"
#include "oracles.hpp"

using namespace cspr;

namespace {

// Pinned parameters. Seeds were fixed before the first run and are not tuned.
constexpr std::size_t kN = 1'000'000;
constexpr double kAlpha = 0.05;
constexpr std::uint64_t kJointSeed = 2024;
constexpr std::uint64_t kEnergySeed = 7;
constexpr double kEnergyScale = 0.5;
constexpr std::size_t kSweeps = 50;
constexpr std::uint64_t kSeedPower = 100000;
constexpr std::uint64_t kSeedNull = 200000;
constexpr std::uint64_t kSeedMrfSym = 300000;
constexpr std::uint64_t kSeedMrfAsym = 400000;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

MarkovModel compliant_chain() { return symmetrize_joint(random_joint(kJointSeed)); }

// Per-replicate results of one parallel run of the test pipeline.
struct ReplicateResult {
    std::optional<double> eta;
    std::optional<double> p;
    std::size_t m_used = 0;
    std::array<double, kPairCount> p_hat{};
    std::optional<SymMatrix16> sigma;
    double max_parity = 0.0;
};

template <typename Sim>
std::vector<ReplicateResult> run_replicates(std::size_t reps, Sim simulate, std::size_t keep_sigma,
                                            std::size_t parity_k) {
    std::vector<ReplicateResult> out(reps);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t r = 0; r < static_cast<std::int64_t>(reps); ++r) {
        const Sequence s = simulate(static_cast<std::size_t>(r));
        auto& res = out[r];
        const auto report = run_test(s);
        res.eta = report.eta;
        res.p = report.p_value;
        res.m_used = report.m_used;
        const auto pc = count_pairs(s);
        for (std::size_t ab = 0; ab < kPairCount; ++ab) res.p_hat[ab] = pc.frequency(ab);
        if (static_cast<std::size_t>(r) < keep_sigma) res.sigma = sigma_hat_adaptive(s).matrix;
        if (parity_k > 0) {
            for (double d : kmer_parity_report(s, parity_k)) res.max_parity = std::max(res.max_parity, d);
        }
    }
    return out;
}

double rejection_rate(const std::vector<ReplicateResult>& rs, std::size_t count, double alpha) {
    std::size_t rej = 0;
    for (std::size_t i = 0; i < count; ++i) rej += rs[i].p && *rs[i].p <= alpha;
    return static_cast<double>(rej) / static_cast<double>(count);
}

std::size_t singular_count(const std::vector<ReplicateResult>& rs) {
    return static_cast<std::size_t>(std::count_if(rs.begin(), rs.end(), [](const auto& r) { return !r.p; }));
}

// --- Criterion 1 -----------------------------------------------------------------------------

Outcome criterion_power_markov() {
    const auto q = stationary_joint(compliant_chain().P);
    const auto model = perturb_joint(q, pair_index(Nucleotide::A, Nucleotide::A), 0.05);
    const auto rs = run_replicates(
        200, [&](std::size_t r) { return sample_markov(model, kN, replicate_seed(kSeedPower, r)); }, 0, 0);
    const double rate = rejection_rate(rs, rs.size(), kAlpha);
    return {rate >= 0.99, fmt("rejection rate %.4f over 200 replicates (need >= 0.99)", rate)};
}

// --- Criteria 2, 3, 6 share the compliant replicates -------------------------------------------

const std::vector<ReplicateResult>& null_replicates() {
    static const auto rs = [] {
        const auto model = compliant_chain();
        return run_replicates(
            1000, [&](std::size_t r) { return sample_markov(model, kN, replicate_seed(kSeedNull, r)); }, 500, 0);
    }();
    return rs;
}

Outcome criterion_level() {
    const auto& rs = null_replicates();
    bool pass = true;
    std::string detail;
    for (double alpha : {0.01, 0.05}) {
        const double rate = rejection_rate(rs, 500, alpha);
        const double band = 3.0 * std::sqrt(alpha * (1 - alpha) / 500.0);
        const bool ok = std::abs(rate - alpha) <= band;
        pass = pass && ok;
        detail += fmt("alpha=%.2f rate=%.4f band=[%.4f, %.4f]; ", alpha, rate, alpha - band, alpha + band);
    }
    detail += fmt("singular=%zu", singular_count(rs));
    return {pass, detail};
}

Outcome criterion_null_shape() {
    const auto& rs = null_replicates();
    std::vector<double> eta;
    for (const auto& r : rs)
        if (r.eta) eta.push_back(*r.eta);
    std::sort(eta.begin(), eta.end());
    const double R = static_cast<double>(eta.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < eta.size(); ++i) {
        const double F = oracle::chi2_5_cdf_closed(eta[i]);
        ks = std::max({ks, (static_cast<double>(i) + 1) / R - F, F - static_cast<double>(i) / R});
    }
    // Type-7 sample quantile.
    const double h = (R - 1) * 0.95;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const double q95 = eta[lo] + (h - static_cast<double>(lo)) * (eta[std::min(lo + 1, eta.size() - 1)] - eta[lo]);
    const bool pass = eta.size() == rs.size() && std::abs(q95 - 11.07) <= 0.6 && ks <= 0.05;
    return {pass, fmt("q95=%.4f (need 11.07 +/- 0.6), KS=%.4f (need <= 0.05), %zu of %zu statistics defined", q95,
                      ks, eta.size(), rs.size())};
}

// Exact long-run covariance of the dinucleotide indicators of a stationary chain:
// sum over all lags of Cov(1{X_0 X_1 = ab}, 1{X_k X_{k+1} = cd}).
std::array<double, 256> analytic_sigma(const MarkovModel& m) {
    const auto q = stationary_joint(m.P);
    std::array<double, 256> sigma{};
    for (std::size_t ab = 0; ab < 16; ++ab) {
        sigma[17 * ab] += q[ab];
        for (std::size_t cd = 0; cd < 16; ++cd) sigma[16 * ab + cd] -= q[ab] * q[cd];
    }
    // power = P^{k-1}
    std::array<double, 16> power{};
    for (std::size_t a = 0; a < 4; ++a) power[5 * a] = 1.0;
    for (int k = 1; k <= 400; ++k) {
        for (std::size_t ab = 0; ab < 16; ++ab) {
            for (std::size_t cd = 0; cd < 16; ++cd) {
                const double c = q[ab] * power[4 * (ab & 3) + (cd >> 2)] * m.P[cd] - q[ab] * q[cd];
                sigma[16 * ab + cd] += c;
                sigma[16 * cd + ab] += c;
            }
        }
        std::array<double, 16> next{};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                for (std::size_t t = 0; t < 4; ++t) next[4 * i + j] += power[4 * i + t] * m.P[4 * t + j];
        power = next;
    }
    return sigma;
}

Outcome criterion_covariance() {
    const auto& rs = null_replicates();
    constexpr std::size_t R = 500;
    const double n = static_cast<double>(kN);
    std::array<double, 16> mean{};
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t k = 0; k < 16; ++k) mean[k] += rs[r].p_hat[k] / R;
    std::array<double, 256> ensemble{}, estimate{};
    for (std::size_t r = 0; r < R; ++r) {
        for (std::size_t i = 0; i < 16; ++i) {
            for (std::size_t j = 0; j < 16; ++j) {
                ensemble[16 * i + j] += n * (rs[r].p_hat[i] - mean[i]) * (rs[r].p_hat[j] - mean[j]) / (R - 1);
                estimate[16 * i + j] += (*rs[r].sigma)(i, j) / R;
            }
        }
    }
    const auto truth = analytic_sigma(compliant_chain());
    std::size_t checked = 0, failed = 0, exact_failed = 0;
    double worst = 0.0, worst_vs_truth = 0.0, median_noise = 0.0;
    std::vector<double> noise;
    for (std::size_t i = 0; i < 16; ++i) {
        for (std::size_t j = 0; j < 16; ++j) {
            const std::size_t k = 16 * i + j;
            if (std::abs(truth[k]) < 0.01) continue;
            ++checked;
            const double rel = std::abs(estimate[k] - ensemble[k]) / std::abs(ensemble[k]);
            failed += rel > 0.15;
            worst = std::max(worst, rel);
            worst_vs_truth = std::max(worst_vs_truth, std::abs(estimate[k] - truth[k]) / std::abs(truth[k]));
            // Diagnostics only: how the exact covariance itself scores against the ensemble, and the
            // ensemble's own relative standard error (Gaussian approximation).
            exact_failed += std::abs(truth[k] - ensemble[k]) / std::abs(ensemble[k]) > 0.15;
            noise.push_back(std::sqrt((truth[17 * i] * truth[17 * j] + truth[k] * truth[k]) / (R - 1)) /
                            std::abs(truth[k]));
        }
    }
    if (!noise.empty()) {
        std::nth_element(noise.begin(), noise.begin() + noise.size() / 2, noise.end());
        median_noise = noise[noise.size() / 2];
    }
    return {checked > 0 && failed == 0,
            fmt("%zu entries with |true| >= 0.01, %zu beyond 15%%, max rel err %.4f. Diagnostics: estimate vs "
                "exact max rel err %.4f; the exact covariance would itself miss %zu entries; median relative SE "
                "of the ensemble entries %.3f",
                checked, failed, worst, worst_vs_truth, exact_failed, median_noise)};
}

// --- Criteria 4 and 5 ------------------------------------------------------------------------

CliqueEnergy symmetric_energy() { return symmetrize_energy(random_energy(3, kEnergyScale, kEnergySeed)); }

Outcome criterion_mrf_symmetric() {
    const GibbsSampler sampler(symmetric_energy());
    const auto rs = run_replicates(
        100, [&](std::size_t r) { return sampler.sample(kN, kSweeps, replicate_seed(kSeedMrfSym, r)); }, 0, 3);
    const double accept = 1.0 - rejection_rate(rs, rs.size(), kAlpha) - static_cast<double>(singular_count(rs)) / 100.0;
    double parity = 0.0;
    for (const auto& r : rs) parity = std::max(parity, r.max_parity);
    const double bound = 10.0 / std::sqrt(static_cast<double>(kN));
    return {accept >= 0.90 && parity <= bound,
            fmt("acceptance %.3f (need >= 0.90), max k<=3 parity discrepancy %.3g (need <= %.3g)", accept, parity,
                bound)};
}

Outcome criterion_mrf_asymmetric() {
    const GibbsSampler sampler(perturb_energy(symmetric_energy(), 0.1));
    const auto rs = run_replicates(
        100, [&](std::size_t r) { return sampler.sample(kN, kSweeps, replicate_seed(kSeedMrfAsym, r)); }, 0, 0);
    const double rate = rejection_rate(rs, rs.size(), kAlpha);
    return {rate >= 0.95, fmt("rejection rate %.3f over 100 replicates (need >= 0.95)", rate)};
}

// --- Criterion 7 -----------------------------------------------------------------------------

std::string decode(std::uint64_t index, std::size_t length) {
    std::string s(length, 'A');
    for (std::size_t i = 0; i < length; ++i, index >>= 2) s[i] = "ACGT"[index & 3u];
    return s;
}

bool counts_match(const std::string& text, std::size_t max_lag) {
    const auto s = Sequence::from_string(text);
    const auto want = oracle::naive_pairs(text);
    if (count_pairs(s).counts != want || serial::count_pairs(s).counts != want) return false;
    const auto codes = pair_codes(s);
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        const auto naive = oracle::naive_lag(text, lag);
        if (count_lag_pairs(codes, lag, Topology::circular).counts != naive) return false;
        if (serial::count_lag_pairs(s, lag).counts != naive) return false;
    }
    return true;
}

Outcome criterion_counting() {
    // Every sequence of length 2..6 (5456 cases), then a fixed stride through lengths 7..12.
    std::vector<std::string> cases;
    for (std::size_t len = 2; len <= 6; ++len)
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << (2 * len)); ++i) cases.push_back(decode(i, len));
    const std::size_t exhaustive = cases.size();
    const std::size_t per_length = (10000 - exhaustive + 5) / 6;
    for (std::size_t len = 7; len <= 12 && cases.size() < 10000; ++len) {
        const std::uint64_t space = std::uint64_t{1} << (2 * len);
        const std::uint64_t stride = space / per_length;
        for (std::size_t i = 0; i < per_length && cases.size() < 10000; ++i) cases.push_back(decode(i * stride + i, len));
    }
    std::size_t bad = 0;
    for (const auto& c : cases) bad += !counts_match(c, c.size() + 1);

    std::mt19937_64 gen(77);
    std::size_t bad_random = 0;
    for (int r = 0; r < 100; ++r) bad_random += !counts_match(oracle::random_bases(10000, gen), 25);

    return {cases.size() == 10000 && bad == 0 && bad_random == 0,
            fmt("%zu enumerated cases (%zu exhaustive), %zu mismatches; 100 random length-1e4, %zu mismatches",
                cases.size(), exhaustive, bad, bad_random)};
}

// --- Criterion 8 -----------------------------------------------------------------------------

SymMatrix5 random_spd(std::mt19937_64& gen, double condition) {
    std::normal_distribution<double> normal;
    std::array<std::array<double, 5>, 5> q{};
    for (auto& row : q)
        for (auto& v : row) v = normal(gen);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < 5; ++k) dot += q[i][k] * q[j][k];
            for (std::size_t k = 0; k < 5; ++k) q[i][k] -= dot * q[j][k];
        }
        double norm = 0.0;
        for (double v : q[i]) norm += v * v;
        for (double& v : q[i]) v /= std::sqrt(norm);
    }
    std::array<double, 25> raw{};
    for (std::size_t r = 0; r < 5; ++r)
        for (std::size_t c = 0; c < 5; ++c)
            for (std::size_t k = 0; k < 5; ++k)
                raw[r * 5 + c] += q[k][r] * std::pow(condition, static_cast<double>(k) / 4.0) * q[k][c];
    return SymMatrix5::from_square(raw);
}

Outcome criterion_numerics() {
    double worst_cdf = 0.0;
    for (double df : {1.0, 2.0, 5.0, 10.0, 30.0}) {
        for (int i = 1; i <= 200; ++i) {
            const double x = 60.0 * i / 200.0;
            worst_cdf = std::max(worst_cdf, std::abs(chi2_cdf(x, df) - oracle::chi2_cdf_oracle(x, df)));
        }
    }
    const double q = chi2_quantile(0.95, 5);

    std::mt19937_64 gen(8);
    std::normal_distribution<double> normal;
    double worst_resid = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double cond = std::pow(10.0, 6.0 * (trial % 7) / 6.0);
        const auto m = random_spd(gen, cond);
        Vector5 b{};
        for (double& v : b) v = normal(gen);
        const auto x = solve_spd(m, b);
        double resid = 0.0, bmax = 0.0;
        for (std::size_t r = 0; r < 5; ++r) {
            double ax = 0.0;
            for (std::size_t c = 0; c < 5; ++c) ax += m(r, c) * x[c];
            resid = std::max(resid, std::abs(ax - b[r]));
            bmax = std::max(bmax, std::abs(b[r]));
        }
        worst_resid = std::max(worst_resid, resid / bmax);
    }
    return {worst_cdf <= 1e-8 && std::abs(q - 11.0705) <= 1e-3 && worst_resid <= 1e-10,
            fmt("max |cdf - oracle| %.3g over 5 x 200 points; quantile(0.95, 5) = %.6f; max relative residual %.3g",
                worst_cdf, q, worst_resid)};
}

// --- Criterion 9 -----------------------------------------------------------------------------

Outcome criterion_identities() {
    std::mt19937_64 gen(99);
    std::size_t violations = 0;
    double worst_v = 0.0;
    const auto& lambda = lambda_matrix();
    for (int trial = 0; trial < 200; ++trial) {
        Sequence s;
        const std::size_t len = 200 + gen() % 20000;
        if (trial % 2 == 0) {
            s = Sequence::from_string(oracle::random_bases(len, gen));
        } else {
            const auto q = stationary_joint(symmetrize_joint(random_joint(trial)).P);
            s = sample_markov(perturb_joint(q, gen() % 16, 0.2 * (trial % 3)), len, trial);
        }
        const auto pc = count_pairs(s);
        const auto f = f_full(pc);
        for (std::size_t a = 0; a < 4; ++a) violations += f[4 * a + (3 - a)] != 0.0;
        for (std::size_t ab = 0; ab < 16; ++ab) violations += f[ab] != -f[reverse_complement_pair(ab)];
        const auto fk = f_vector(pc);
        for (std::size_t r = 0; r < kKSize; ++r) {
            std::int64_t dot = 0;
            for (std::size_t c = 0; c < 16; ++c) dot += lambda[r][c] * static_cast<std::int64_t>(pc.counts[c]);
            violations += fk[r] != static_cast<double>(dot) / static_cast<double>(pc.n);
        }

        const auto sigma = sigma_hat(s, 1 + gen() % 8);
        const auto v = v_hat(sigma);
        for (std::size_t r = 0; r < kKSize; ++r) {
            for (std::size_t c = 0; c < kKSize; ++c) {
                double full = 0.0;
                for (std::size_t i = 0; i < 16; ++i)
                    for (std::size_t j = 0; j < 16; ++j) full += lambda[r][i] * sigma.matrix(i, j) * lambda[c][j];
                worst_v = std::max(worst_v, std::abs(full - v.matrix(r, c)));
            }
        }

        const auto base = run_test(s);
        for (int k = 0; k < 3; ++k) {
            const auto rot = run_test(s.rotated(gen() % s.size()));
            violations += rot.eta != base.eta || rot.m_used != base.m_used;
        }
    }
    return {violations == 0 && worst_v <= 1e-12,
            fmt("200 sequences: %zu exact-identity violations, max |V four-term - Lambda Sigma Lambda'| %.3g",
                violations, worst_v)};
}

// --- Criterion 10 ----------------------------------------------------------------------------

Outcome criterion_summary() {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "cspr_acceptance_summary";
    fs::create_directories(dir);
    // Lengths 100, 200, 400, 1000 with GC contents 0.5, 0.25, 0.75, 1.0.
    const auto path = (dir / "corpus.fa").string();
    {
        std::ofstream out(path);
        out << ">r1\n" << std::string(50, 'G') << std::string(50, 'A') << '\n';
        out << ">r2\n" << std::string(50, 'C') << std::string(150, 'T') << '\n';
        out << ">r3\n" << std::string(150, 'G') << std::string(150, 'C') << std::string(100, 'A') << '\n';
        out << ">r4\n" << std::string(1000, 'C') << '\n';
    }
    std::ostringstream out, err;
    const int code = cli::cmd_summary({path}, {}, out, err);
    fs::remove_all(dir);

    std::istringstream lines(out.str());
    std::string line;
    std::map<std::string, std::vector<double>> rows;
    while (std::getline(lines, line)) {
        std::istringstream fields(line);
        std::string name;
        std::getline(fields, name, '\t');
        std::vector<double> v;
        for (std::string x; std::getline(fields, x, '\t');) v.push_back(std::strtod(x.c_str(), nullptr));
        rows[name] = v;
    }
    // Hand-computed: type-7 quartiles, n-1 standard deviation.
    const std::vector<double> length{175, 300, 550, 425, std::sqrt(162500.0)};
    const std::vector<double> gc{0.4375, 0.625, 0.8125, 0.625, std::sqrt(0.3125 / 3.0)};
    const auto close = [](const std::vector<double>& got, const std::vector<double>& want) {
        if (got.size() != want.size()) return false;
        for (std::size_t i = 0; i < got.size(); ++i)
            if (std::abs(got[i] - want[i]) > 1e-12 * std::max(1.0, std::abs(want[i]))) return false;
        return true;
    };
    const bool pass = code == 0 && rows.count("# records") && rows["# records"] == std::vector<double>{4} &&
                      close(rows["length"], length) && close(rows["gc_content"], gc);
    return {pass, "corpus statistics checked on a synthetic 4-record corpus against hand-computed values"};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"power, non-compliant Markov", criterion_power_markov},
        {"level, compliant Markov", criterion_level},
        {"null distribution shape", criterion_null_shape},
        {"symmetric MRF compliance", criterion_mrf_symmetric},
        {"non-symmetric MRF rejection", criterion_mrf_asymmetric},
        {"covariance oracle", criterion_covariance},
        {"counting oracle", criterion_counting},
        {"numerics", criterion_numerics},
        {"algebraic identities", criterion_identities},
        {"summary statistics", criterion_summary},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += !o.pass;
        std::printf("[%s] criterion %d: %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
