#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cspr {

// Precondition violated (sequence too short, lag out of range, bad probability...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// FASTA text that is not structurally valid.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A non-ACGT symbol encountered under the strict ambiguity policy.
class ContentError : public std::runtime_error {
public:
    ContentError(const std::string& what, std::size_t position)
        : std::runtime_error(what), position_(position) {}

    // Zero-based offset of the offending symbol within its record's sequence data.
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// Cholesky pivot at or below the scale-relative tolerance.
class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(std::size_t pivot_index, double pivot)
        : std::runtime_error("matrix is not positive definite at pivot " +
                             std::to_string(pivot_index)),
          pivot_index_(pivot_index), pivot_(pivot) {}

    std::size_t pivot_index() const noexcept { return pivot_index_; }
    double pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_index_;
    double pivot_;
};

// Invalid key or value in a key-value experiment config.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& key, const std::string& message)
        : std::runtime_error("config key '" + key + "': " + message), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// A Markov model whose transition matrix cannot be formed.
class DegenerateModel : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace cspr
