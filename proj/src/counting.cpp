#include "cspr/counting.hpp"

#include <omp.h>

#include "cspr/errors.hpp"

namespace cspr {

namespace {

// Below this many windows the thread start-up costs more than the scan.
constexpr std::size_t kParallelThreshold = std::size_t{1} << 15;

void require_countable(const Sequence& s) {
    if (s.size() < 2) {
        throw DomainError("dinucleotide counting needs length >= 2, got " + std::to_string(s.size()));
    }
}

std::uint64_t window_count(std::size_t length, Topology t) {
    return t == Topology::circular ? length : length - 1;
}

}  // namespace

std::vector<std::uint8_t> pair_codes(const Sequence& s) {
    require_countable(s);
    const auto bases = s.bases();
    const std::size_t len = bases.size();
    const std::size_t windows = window_count(len, s.topology());
    std::vector<std::uint8_t> codes(windows);
    const auto* b = reinterpret_cast<const std::uint8_t*>(bases.data());
#pragma omp parallel for schedule(static) if (windows > kParallelThreshold)
    for (std::int64_t j = 0; j < static_cast<std::int64_t>(len - 1); ++j) {
        codes[j] = static_cast<std::uint8_t>((b[j] << 2) | b[j + 1]);
    }
    if (s.circular()) codes[len - 1] = static_cast<std::uint8_t>((b[len - 1] << 2) | b[0]);
    return codes;
}

PairCounts count_pairs(const Sequence& s) { return count_pairs(pair_codes(s)); }

PairCounts count_pairs(std::span<const std::uint8_t> codes) {
    PairCounts pc;
    pc.n = codes.size();
    const std::size_t nw = codes.size();
#pragma omp parallel if (nw > kParallelThreshold)
    {
        std::array<std::uint64_t, kPairCount> local{};
#pragma omp for schedule(static) nowait
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(nw); ++j) ++local[codes[j]];
#pragma omp critical(cspr_count_pairs)
        for (std::size_t k = 0; k < kPairCount; ++k) pc.counts[k] += local[k];
    }
    return pc;
}

LagPairCounts count_lag_pairs(std::span<const std::uint8_t> codes, std::size_t lag, Topology topology) {
    LagPairCounts out;
    out.lag = lag;
    out.n = codes.size();
    const std::size_t nw = codes.size();
    if (nw == 0) throw DomainError("lag counting needs at least one window");

    // Split the scan so the inner loops carry no modulo: [0, head) reads codes[j + shift],
    // [head, tail) reads codes[j + shift - nw] (circular wrap only).
    std::size_t shift = lag;
    std::size_t head = 0;
    std::size_t tail = 0;
    if (topology == Topology::circular) {
        shift = lag % nw;
        head = nw - shift;
        tail = nw;
    } else {
        // Linear: nw = length - 1 windows; window j+lag must exist.
        if (lag > nw - 1) {
            throw DomainError("lag " + std::to_string(lag) + " exceeds length - 2 for a linear sequence");
        }
        head = nw - lag;
        tail = head;
    }

    const std::uint8_t* c = codes.data();
#pragma omp parallel if (nw > kParallelThreshold)
    {
        std::array<std::uint64_t, kPairCount * kPairCount> local{};
#pragma omp for schedule(static) nowait
        for (std::int64_t j = 0; j < static_cast<std::int64_t>(head); ++j) {
            ++local[(std::size_t{c[j]} << 4) | c[j + shift]];
        }
#pragma omp for schedule(static) nowait
        for (std::int64_t j = static_cast<std::int64_t>(head); j < static_cast<std::int64_t>(tail); ++j) {
            ++local[(std::size_t{c[j]} << 4) | c[j + shift - nw]];
        }
#pragma omp critical(cspr_count_lag_pairs)
        for (std::size_t k = 0; k < local.size(); ++k) out.counts[k] += local[k];
    }
    return out;
}

LagPairCounts count_lag_pairs(const Sequence& s, std::size_t lag) {
    const auto codes = pair_codes(s);
    return count_lag_pairs(codes, lag, s.topology());
}

std::array<double, kPairCount> f_full(const PairCounts& pc) {
    std::array<double, kPairCount> f{};
    const double n = static_cast<double>(pc.n);
    for (std::size_t ab = 0; ab < kPairCount; ++ab) {
        const auto rc = reverse_complement_pair(ab);
        // Integer difference first: exact, and f(a,Γ(a)) comes out as an exact zero.
        const auto diff = static_cast<std::int64_t>(pc.counts[ab]) - static_cast<std::int64_t>(pc.counts[rc]);
        f[ab] = static_cast<double>(diff) / n;
    }
    return f;
}

FVector f_vector(const PairCounts& pc) {
    if (pc.n == 0) throw DomainError("f_vector needs n >= 1");
    const auto f = f_full(pc);
    FVector out{};
    for (std::size_t r = 0; r < kKSize; ++r) out[r] = f[kIndexSetK[r]];
    return out;
}

const LambdaMatrix& lambda_matrix() {
    static const LambdaMatrix lambda = [] {
        LambdaMatrix m{};
        for (std::size_t r = 0; r < kKSize; ++r) {
            const auto ab = kIndexSetK[r];
            m[r][ab] = 1;
            m[r][reverse_complement_pair(ab)] = -1;
        }
        return m;
    }();
    return lambda;
}

namespace serial {

PairCounts count_pairs(const Sequence& s) {
    require_countable(s);
    const auto b = s.bases();
    const std::size_t len = b.size();
    PairCounts pc;
    pc.n = window_count(len, s.topology());
    for (std::size_t j = 0; j < pc.n; ++j) {
        ++pc.counts[pair_index(b[j], b[(j + 1) % len])];
    }
    return pc;
}

LagPairCounts count_lag_pairs(const Sequence& s, std::size_t lag) {
    require_countable(s);
    const auto b = s.bases();
    const std::size_t len = b.size();
    LagPairCounts out;
    out.lag = lag;
    out.n = window_count(len, s.topology());
    std::size_t starts = len;
    if (!s.circular()) {
        if (lag > len - 2) {
            throw DomainError("lag " + std::to_string(lag) + " exceeds length - 2 for a linear sequence");
        }
        starts = len - 1 - lag;
    }
    for (std::size_t j = 0; j < starts; ++j) {
        const auto ab = pair_index(b[j], b[(j + 1) % len]);
        const auto cd = pair_index(b[(j + lag) % len], b[(j + lag + 1) % len]);
        ++out.counts[kPairCount * ab + cd];
    }
    return out;
}

}  // namespace serial

}  // namespace cspr
