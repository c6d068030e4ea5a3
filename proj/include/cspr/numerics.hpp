#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace cspr {

// Dense symmetric N x N matrix. Writes go through set(), which mirrors the entry;
// symmetrize() replaces the storage by (M + M')/2.
template <std::size_t N>
class SymMatrix {
public:
    static constexpr std::size_t dim = N;

    SymMatrix() = default;

    static SymMatrix identity(double scale = 1.0) {
        SymMatrix m;
        for (std::size_t i = 0; i < N; ++i) m.data_[i * N + i] = scale;
        return m;
    }

    // Takes an arbitrary square array and stores its symmetric part.
    static SymMatrix from_square(const std::array<double, N * N>& raw) {
        SymMatrix m;
        m.data_ = raw;
        m.symmetrize();
        return m;
    }

    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * N + j]; }

    void set(std::size_t i, std::size_t j, double v) noexcept {
        data_[i * N + j] = v;
        data_[j * N + i] = v;
    }

    void symmetrize() noexcept {
        for (std::size_t i = 0; i < N; ++i) {
            for (std::size_t j = i + 1; j < N; ++j) {
                const double v = 0.5 * (data_[i * N + j] + data_[j * N + i]);
                data_[i * N + j] = v;
                data_[j * N + i] = v;
            }
        }
    }

    double max_diagonal() const noexcept {
        double m = data_[0];
        for (std::size_t i = 1; i < N; ++i) m = std::max(m, data_[i * N + i]);
        return m;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    SymMatrix& operator*=(double c) noexcept {
        for (double& v : data_) v *= c;
        return *this;
    }

    const std::array<double, N * N>& raw() const noexcept { return data_; }

    friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

private:
    std::array<double, N * N> data_{};
};

using SymMatrix5 = SymMatrix<5>;
using SymMatrix16 = SymMatrix<16>;

using Vector5 = std::array<double, 5>;

inline constexpr double kDefaultPdTolerance = 1e-12;

// Cholesky solve of M x = b. A pivot <= pd_relative * max(diag M) raises NotPositiveDefinite.
Vector5 solve_spd(const SymMatrix5& m, const Vector5& b, double pd_relative = kDefaultPdTolerance);

// Regularized incomplete gamma functions, a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi2_cdf(double x, double df);
// Upper tail 1 - chi2_cdf, evaluated without cancellation.
double chi2_sf(double x, double df);
double chi2_quantile(double p, double df);

}  // namespace cspr
