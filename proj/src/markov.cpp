#include "cspr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cspr/errors.hpp"
#include "cspr/rng.hpp"

namespace cspr {

void MarkovModel::validate() const {
    double pi_sum = 0.0;
    for (double v : pi) {
        if (!(v >= 0.0)) throw DomainError("initial distribution has a negative entry");
        pi_sum += v;
    }
    if (std::abs(pi_sum - 1.0) > 1e-12) throw DomainError("initial distribution does not sum to 1");
    for (std::size_t a = 0; a < kAlphabetSize; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < kAlphabetSize; ++b) {
            if (!(P[4 * a + b] >= 0.0)) throw DomainError("transition matrix has a negative entry");
            row += P[4 * a + b];
        }
        if (std::abs(row - 1.0) > 1e-12) throw DomainError("transition row " + std::to_string(a) + " does not sum to 1");
    }
}

std::array<double, kAlphabetSize> stationary_distribution(const Transition& P) {
    // pi (P - I) = 0 with the last equation replaced by sum(pi) = 1; A pi' = e_4.
    constexpr std::size_t n = kAlphabetSize;
    std::array<std::array<double, n + 1>, n> a{};
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) a[r][c] = P[4 * c + r] - (r == c ? 1.0 : 0.0);
    }
    for (std::size_t c = 0; c < n; ++c) a[n - 1][c] = 1.0;
    a[n - 1][n] = 1.0;

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (std::abs(a[pivot][col]) < 1e-300) throw DegenerateModel("transition matrix has no unique stationary distribution");
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
        }
    }
    std::array<double, n> pi{};
    for (std::size_t r = 0; r < n; ++r) pi[r] = a[r][n] / a[r][r];
    return pi;
}

Joint stationary_joint(const Transition& P) {
    const auto pi = stationary_distribution(P);
    Joint q{};
    for (std::size_t ab = 0; ab < kPairCount; ++ab) q[ab] = pi[ab >> 2] * P[ab];
    return q;
}

namespace {

MarkovModel chain_from_rows(const Joint& q) {
    MarkovModel m;
    for (std::size_t a = 0; a < kAlphabetSize; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < kAlphabetSize; ++b) row += q[4 * a + b];
        if (!(row > 0.0)) throw DegenerateModel("joint has an all-zero row for base " + std::string(1, to_char(from_code(static_cast<std::uint8_t>(a)))));
        for (std::size_t b = 0; b < kAlphabetSize; ++b) m.P[4 * a + b] = q[4 * a + b] / row;
    }
    return m;
}

bool joint_is_symmetric(const Joint& q, double tol) {
    for (std::size_t ab = 0; ab < kPairCount; ++ab) {
        if (std::abs(q[ab] - q[reverse_complement_pair(ab)]) > tol) return false;
    }
    return true;
}

}  // namespace

MarkovModel symmetrize_joint(const Joint& q) {
    double total = 0.0;
    for (double v : q) {
        if (!(v > 0.0)) throw DomainError("joint distribution must be strictly positive");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("joint distribution does not sum to 1");
    for (std::size_t a = 0; a < kAlphabetSize; ++a) {
        double row = 0.0;
        double col = 0.0;
        for (std::size_t b = 0; b < kAlphabetSize; ++b) {
            row += q[4 * a + b];
            col += q[4 * b + a];
        }
        if (std::abs(row - col) > 1e-9) throw DomainError("joint distribution marginals do not match");
    }

    Joint sym{};
    for (std::size_t ab = 0; ab < kPairCount; ++ab) sym[ab] = 0.5 * (q[ab] + q[reverse_complement_pair(ab)]);

    MarkovModel m = chain_from_rows(sym);
    // Row marginals of sym are its stationary law because its marginals still match.
    for (std::size_t a = 0; a < kAlphabetSize; ++a) {
        m.pi[a] = sym[4 * a] + sym[4 * a + 1] + sym[4 * a + 2] + sym[4 * a + 3];
    }
    const double pi_sum = std::accumulate(m.pi.begin(), m.pi.end(), 0.0);
    for (double& v : m.pi) v /= pi_sum;
    m.compliant = true;
    return m;
}

Joint random_joint(std::uint64_t seed) {
    Rng rng(seed);
    Transition P{};
    for (std::size_t a = 0; a < kAlphabetSize; ++a) {
        double row = 0.0;
        for (std::size_t b = 0; b < kAlphabetSize; ++b) {
            P[4 * a + b] = 0.5 + rng.uniform();
            row += P[4 * a + b];
        }
        for (std::size_t b = 0; b < kAlphabetSize; ++b) P[4 * a + b] /= row;
    }
    return stationary_joint(P);
}

MarkovModel perturb_joint(const Joint& q, std::size_t pair, double epsilon) {
    if (pair >= kPairCount) throw DomainError("pair index out of range");
    if (!(1.0 + epsilon > 0.0)) throw DomainError("epsilon must exceed -1");
    Joint p = q;
    p[pair] *= 1.0 + epsilon;
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= total;
    MarkovModel m = chain_from_rows(p);
    m.pi = stationary_distribution(m.P);
    m.compliant = epsilon == 0.0 && joint_is_symmetric(stationary_joint(m.P), 1e-10);
    return m;
}

Sequence sample_markov(const MarkovModel& model, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw DomainError("sample_markov needs n >= 2");
    model.validate();
    std::array<double, kAlphabetSize> pi_cum{};
    std::array<std::array<double, kAlphabetSize>, kAlphabetSize> row_cum{};
    std::partial_sum(model.pi.begin(), model.pi.end(), pi_cum.begin());
    pi_cum.back() = 1.0;
    for (std::size_t a = 0; a < kAlphabetSize; ++a) {
        std::partial_sum(model.P.begin() + 4 * a, model.P.begin() + 4 * a + 4, row_cum[a].begin());
        row_cum[a].back() = 1.0;
    }
    auto draw = [](const std::array<double, kAlphabetSize>& cum, double u) {
        std::uint8_t c = 0;
        while (c < 3 && !(u < cum[c])) ++c;
        return c;
    };

    Rng rng(seed);
    std::vector<Nucleotide> bases(n);
    std::uint8_t state = draw(pi_cum, rng.uniform());
    bases[0] = from_code(state);
    for (std::size_t i = 1; i < n; ++i) {
        state = draw(row_cum[state], rng.uniform());
        bases[i] = from_code(state);
    }
    return Sequence("markov_seed" + std::to_string(seed), std::move(bases), Topology::circular);
}

}  // namespace cspr
