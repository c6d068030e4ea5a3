#include "cspr/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "cspr/errors.hpp"

namespace cspr {

namespace {

constexpr std::size_t ipow4(std::size_t j) noexcept { return std::size_t{1} << (2 * j); }

}  // namespace

CliqueEnergy::CliqueEnergy(std::vector<std::vector<double>> tables) : tables_(std::move(tables)) {
    if (tables_.empty() || tables_.size() > 4) throw DomainError("clique size k must be in [1, 4]");
    for (std::size_t j = 1; j <= tables_.size(); ++j) {
        const auto& t = tables_[j - 1];
        if (t.size() != ipow4(j)) {
            throw DomainError("psi^(" + std::to_string(j) + ") needs " + std::to_string(ipow4(j)) + " entries, got " +
                              std::to_string(t.size()));
        }
        for (double v : t) {
            if (!std::isfinite(v)) throw DomainError("psi^(" + std::to_string(j) + ") has a non-finite entry");
        }
    }
}

CliqueEnergy CliqueEnergy::zero(std::size_t k) {
    std::vector<std::vector<double>> t;
    for (std::size_t j = 1; j <= k; ++j) t.emplace_back(ipow4(j), 0.0);
    return CliqueEnergy(std::move(t));
}

std::size_t reverse_complement_word(std::size_t word, std::size_t j) noexcept {
    std::size_t out = 0;
    for (std::size_t t = 0; t < j; ++t) {
        out = (out << 2) | (3u - (word & 3u));
        word >>= 2;
    }
    return out;
}

bool is_energy_symmetric(const CliqueEnergy& e) {
    for (std::size_t j = 1; j <= e.k(); ++j) {
        const auto& t = e.table(j);
        for (std::size_t w = 0; w < t.size(); ++w) {
            if (t[w] != t[reverse_complement_word(w, j)]) return false;
        }
    }
    return true;
}

CliqueEnergy symmetrize_energy(const CliqueEnergy& e) {
    CliqueEnergy out = e;
    for (std::size_t j = 1; j <= e.k(); ++j) {
        const auto& t = e.table(j);
        auto& o = out.table(j);
        for (std::size_t w = 0; w < t.size(); ++w) {
            const std::size_t rc = reverse_complement_word(w, j);
            // Same operand order for w and rc so both get the bit-identical average.
            o[w] = w <= rc ? 0.5 * (t[w] + t[rc]) : 0.5 * (t[rc] + t[w]);
        }
    }
    return out;
}

CliqueEnergy random_energy(std::size_t k, double scale, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<double>> t;
    for (std::size_t j = 1; j <= k; ++j) {
        std::vector<double> table(ipow4(j));
        for (double& v : table) v = scale * (2.0 * rng.uniform() - 1.0);
        t.push_back(std::move(table));
    }
    return CliqueEnergy(std::move(t));
}

CliqueEnergy perturb_energy(const CliqueEnergy& e, double magnitude) {
    CliqueEnergy out = e;
    out.table(e.k())[0] += magnitude;
    return out;
}

GibbsSampler::GibbsSampler(CliqueEnergy energy) : energy_(std::move(energy)), k_(energy_.k()) {
    if (k_ == 0) throw DomainError("GibbsSampler needs a non-empty energy");
    const std::size_t span = 2 * (k_ - 1);
    const std::size_t contexts = ipow4(span);
    cumulative_.resize(contexts);
    std::vector<std::uint8_t> window(2 * k_ - 1);
    for (std::size_t ctx = 0; ctx < contexts; ++ctx) {
        // Decode: the first k-1 digits are sites i-k+1..i-1, the last k-1 are i+1..i+k-1.
        for (std::size_t t = 0; t < span; ++t) {
            const auto digit = static_cast<std::uint8_t>((ctx >> (2 * (span - 1 - t))) & 3u);
            window[t < k_ - 1 ? t : t + 1] = digit;
        }
        std::array<double, 4> energy{};
        for (std::uint8_t a = 0; a < 4; ++a) {
            window[k_ - 1] = a;
            double sum = 0.0;
            for (std::size_t j = 1; j <= k_; ++j) {
                const auto& table = energy_.table(j);
                // Windows of size j containing the centre start at offsets k-j .. k-1.
                for (std::size_t start = k_ - j; start < k_; ++start) {
                    std::size_t w = 0;
                    for (std::size_t t = 0; t < j; ++t) w = (w << 2) | window[start + t];
                    sum += table[w];
                }
            }
            energy[a] = sum;
        }
        const double top = *std::max_element(energy.begin(), energy.end());
        std::array<double, 4> weight{};
        double total = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            weight[a] = std::exp(energy[a] - top);
            total += weight[a];
        }
        double acc = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            acc += weight[a] / total;
            cumulative_[ctx][a] = acc;
        }
        cumulative_[ctx][3] = 1.0;
    }
}

namespace {

inline std::uint8_t draw_from(const std::array<double, 4>& cum, double u) noexcept {
    return static_cast<std::uint8_t>((u >= cum[0]) + (u >= cum[1]) + (u >= cum[2]));
}

}  // namespace

template <std::size_t K>
void GibbsSampler::sweep_fast(std::vector<std::uint8_t>& x, Rng& rng) const {
    const std::size_t n = x.size();
    const std::uint8_t* s = x.data();
    auto context_wrapped = [&](std::size_t i) {
        std::size_t ctx = 0;
        for (std::size_t t = 1; t < K; ++t) ctx = (ctx << 2) | s[(i + n - K + t) % n];
        for (std::size_t t = 1; t < K; ++t) ctx = (ctx << 2) | s[(i + t) % n];
        return ctx;
    };
    auto context_inner = [&](std::size_t i) {
        std::size_t ctx = 0;
        for (std::size_t t = 1; t < K; ++t) ctx = (ctx << 2) | s[i - K + t];
        for (std::size_t t = 1; t < K; ++t) ctx = (ctx << 2) | s[i + t];
        return ctx;
    };
    const std::size_t inner_begin = K - 1;
    const std::size_t inner_end = n - (K - 1);
    for (std::size_t i = 0; i < inner_begin; ++i) x[i] = draw_from(cumulative_[context_wrapped(i)], rng.uniform());
    for (std::size_t i = inner_begin; i < inner_end; ++i) x[i] = draw_from(cumulative_[context_inner(i)], rng.uniform());
    for (std::size_t i = inner_end; i < n; ++i) x[i] = draw_from(cumulative_[context_wrapped(i)], rng.uniform());
}

double GibbsSampler::local_energy(const std::vector<std::uint8_t>& x, std::size_t site) const {
    const std::size_t n = x.size();
    double sum = 0.0;
    for (std::size_t j = 1; j <= k_; ++j) {
        const auto& table = energy_.table(j);
        for (std::size_t back = 0; back < j; ++back) {
            const std::size_t start = (site + n - back) % n;
            std::size_t w = 0;
            for (std::size_t t = 0; t < j; ++t) w = (w << 2) | x[(start + t) % n];
            sum += table[w];
        }
    }
    return sum;
}

// Used when the 2k-1 neighbourhood wraps onto itself (n < 2k - 1).
void GibbsSampler::sweep_exact(std::vector<std::uint8_t>& x, Rng& rng) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::array<double, 4> energy{};
        for (std::uint8_t a = 0; a < 4; ++a) {
            x[i] = a;
            energy[a] = local_energy(x, i);
        }
        const double top = *std::max_element(energy.begin(), energy.end());
        std::array<double, 4> cum{};
        double total = 0.0;
        for (std::size_t a = 0; a < 4; ++a) {
            total += std::exp(energy[a] - top);
            cum[a] = total;
        }
        for (double& c : cum) c /= total;
        cum[3] = 1.0;
        x[i] = draw_from(cum, rng.uniform());
    }
}

Sequence GibbsSampler::sample(std::size_t n, std::size_t sweeps, std::uint64_t seed) const {
    if (n < k_) throw DomainError("gibbs sampling needs n >= k");
    if (sweeps < 1) throw DomainError("gibbs sampling needs at least one sweep");
    Rng rng(seed);
    std::vector<std::uint8_t> x(n);
    for (auto& v : x) v = static_cast<std::uint8_t>(rng.next() >> 62);

    const bool exact = n < 2 * k_ - 1;
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        if (exact) {
            sweep_exact(x, rng);
            continue;
        }
        switch (k_) {
            case 1: sweep_fast<1>(x, rng); break;
            case 2: sweep_fast<2>(x, rng); break;
            case 3: sweep_fast<3>(x, rng); break;
            default: sweep_fast<4>(x, rng); break;
        }
    }
    std::vector<Nucleotide> bases(n);
    std::transform(x.begin(), x.end(), bases.begin(), [](std::uint8_t c) { return from_code(c); });
    return Sequence("mrf_k" + std::to_string(k_) + "_seed" + std::to_string(seed), std::move(bases),
                    Topology::circular);
}

Sequence gibbs_sample_mrf(const CliqueEnergy& e, std::size_t n, std::size_t sweeps, std::uint64_t seed) {
    return GibbsSampler(e).sample(n, sweeps, seed);
}

}  // namespace cspr
