#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cspr/nucleotide.hpp"

namespace cspr {

enum class Topology { circular, linear };

enum class AmbiguityPolicy { skip, error };

struct IngestionPolicy {
    AmbiguityPolicy ambiguity = AmbiguityPolicy::skip;
    Topology default_topology = Topology::circular;
};

// Immutable ACGT sequence with an explicit topology.
class Sequence {
public:
    Sequence() = default;
    Sequence(std::string id, std::vector<Nucleotide> bases,
             Topology topology = Topology::circular, std::size_t skipped_positions = 0);

    // Throws DomainError on any character outside ACGTacgt.
    static Sequence from_string(std::string_view bases, Topology topology = Topology::circular,
                                std::string id = {});

    const std::string& id() const noexcept { return id_; }
    std::span<const Nucleotide> bases() const noexcept { return bases_; }
    std::size_t size() const noexcept { return bases_.size(); }
    bool empty() const noexcept { return bases_.empty(); }
    Topology topology() const noexcept { return topology_; }
    bool circular() const noexcept { return topology_ == Topology::circular; }
    std::size_t skipped_positions() const noexcept { return skipped_; }

    Nucleotide operator[](std::size_t i) const noexcept { return bases_[i]; }

    std::string to_string() const;

    Sequence with_topology(Topology t) const;

    // Left rotation by `offset` positions; only meaningful for circular sequences.
    Sequence rotated(std::size_t offset) const;

    friend bool operator==(const Sequence&, const Sequence&) = default;

private:
    std::string id_;
    std::vector<Nucleotide> bases_;
    Topology topology_ = Topology::circular;
    std::size_t skipped_ = 0;
};

// One Sequence per '>' record. Headers become ids (text after '>' with trailing
// whitespace trimmed). CR/LF, blank lines and intra-line whitespace are ignored.
std::vector<Sequence> parse_fasta(std::istream& in, const IngestionPolicy& policy = {});
std::vector<Sequence> parse_fasta(std::string_view text, const IngestionPolicy& policy = {});

void write_fasta(std::ostream& out, const Sequence& s, std::size_t line_width = 80);

double gc_content(const Sequence& s);

Sequence reverse_complement(const Sequence& s);

}  // namespace cspr
