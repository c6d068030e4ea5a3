#include "cspr/sequence.hpp"

#include <algorithm>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "cspr/errors.hpp"

namespace cspr {

Sequence::Sequence(std::string id, std::vector<Nucleotide> bases, Topology topology,
                   std::size_t skipped_positions)
    : id_(std::move(id)), bases_(std::move(bases)), topology_(topology), skipped_(skipped_positions) {}

Sequence Sequence::from_string(std::string_view bases, Topology topology, std::string id) {
    std::vector<Nucleotide> out;
    out.reserve(bases.size());
    for (std::size_t i = 0; i < bases.size(); ++i) {
        auto b = from_char(bases[i]);
        if (!b) {
            throw DomainError("invalid nucleotide '" + std::string(1, bases[i]) + "' at position " +
                              std::to_string(i));
        }
        out.push_back(*b);
    }
    return Sequence(std::move(id), std::move(out), topology);
}

std::string Sequence::to_string() const {
    std::string s(bases_.size(), 'A');
    std::transform(bases_.begin(), bases_.end(), s.begin(), to_char);
    return s;
}

Sequence Sequence::with_topology(Topology t) const {
    Sequence copy = *this;
    copy.topology_ = t;
    return copy;
}

Sequence Sequence::rotated(std::size_t offset) const {
    Sequence copy = *this;
    if (!bases_.empty()) {
        std::rotate(copy.bases_.begin(), copy.bases_.begin() + static_cast<std::ptrdiff_t>(offset % bases_.size()),
                    copy.bases_.end());
    }
    return copy;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n\v\f");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n\v\f");
    return s.substr(first, last - first + 1);
}

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

struct RecordBuilder {
    std::string id;
    std::vector<Nucleotide> bases;
    std::size_t skipped = 0;
    std::size_t raw_position = 0;
};

}  // namespace

std::vector<Sequence> parse_fasta(std::istream& in, const IngestionPolicy& policy) {
    std::vector<Sequence> records;
    std::optional<RecordBuilder> current;
    auto flush = [&] {
        if (current) {
            records.emplace_back(std::move(current->id), std::move(current->bases),
                                 policy.default_topology, current->skipped);
            current.reset();
        }
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.front() == '>') {
            flush();
            current.emplace();
            current->id = std::string(trim(std::string_view(line).substr(1)));
            continue;
        }
        if (trim(line).empty()) continue;
        if (!current) {
            throw FormatError("sequence data before the first '>' header (line " +
                              std::to_string(line_no) + ")");
        }
        for (char c : line) {
            if (is_space(c)) continue;
            const auto pos = current->raw_position++;
            if (auto b = from_char(c)) {
                current->bases.push_back(*b);
            } else if (policy.ambiguity == AmbiguityPolicy::skip) {
                ++current->skipped;
            } else {
                throw ContentError("non-ACGT symbol '" + std::string(1, c) + "' in record '" +
                                       current->id + "' at position " + std::to_string(pos),
                                   pos);
            }
        }
    }
    flush();
    return records;
}

std::vector<Sequence> parse_fasta(std::string_view text, const IngestionPolicy& policy) {
    std::istringstream in{std::string(text)};
    return parse_fasta(in, policy);
}

void write_fasta(std::ostream& out, const Sequence& s, std::size_t line_width) {
    if (line_width == 0) line_width = s.size() + 1;
    out << '>' << s.id() << '\n';
    const std::string text = s.to_string();
    for (std::size_t i = 0; i < text.size(); i += line_width) {
        out.write(text.data() + i, static_cast<std::streamsize>(std::min(line_width, text.size() - i)));
        out << '\n';
    }
}

double gc_content(const Sequence& s) {
    if (s.empty()) throw DomainError("gc_content of an empty sequence");
    const auto gc = std::count_if(s.bases().begin(), s.bases().end(), [](Nucleotide b) {
        return b == Nucleotide::C || b == Nucleotide::G;
    });
    return static_cast<double>(gc) / static_cast<double>(s.size());
}

Sequence reverse_complement(const Sequence& s) {
    std::vector<Nucleotide> out(s.size());
    const auto in = s.bases();
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = complement(in[in.size() - 1 - j]);
    return Sequence(s.id(), std::move(out), s.topology(), s.skipped_positions());
}

}  // namespace cspr
