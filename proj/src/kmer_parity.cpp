#include <algorithm>
#include <cmath>

#include "cspr/errors.hpp"
#include "cspr/simulation.hpp"

namespace cspr {

std::vector<double> kmer_parity_report(const Sequence& s, std::size_t k_max) {
    if (k_max < 1 || k_max > 6) throw DomainError("kmer_parity_report supports 1 <= k_max <= 6");
    if (s.size() < k_max) throw DomainError("sequence shorter than k_max");
    const auto b = s.bases();
    const std::size_t n = b.size();
    std::vector<double> report;
    for (std::size_t k = 1; k <= k_max; ++k) {
        const std::size_t words = std::size_t{1} << (2 * k);
        const std::size_t mask = words - 1;
        std::vector<std::uint64_t> counts(words, 0);
        std::size_t w = 0;
        for (std::size_t t = 0; t + 1 < k; ++t) w = (w << 2) | code(b[t]);
        for (std::size_t i = 0; i < n; ++i) {
            w = ((w << 2) | code(b[(i + k - 1) % n])) & mask;
            ++counts[w];
        }
        double worst = 0.0;
        for (std::size_t word = 0; word < words; ++word) {
            const auto rc = reverse_complement_word(word, k);
            const double diff = std::abs(static_cast<double>(counts[word]) - static_cast<double>(counts[rc]));
            worst = std::max(worst, diff / static_cast<double>(n));
        }
        report.push_back(worst);
    }
    return report;
}

}  // namespace cspr
