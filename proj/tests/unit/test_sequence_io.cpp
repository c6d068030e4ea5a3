#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "cspr/errors.hpp"
#include "cspr/sequence.hpp"
#include "oracles.hpp"

using namespace cspr;

TEST(Nucleotide, ComplementIsAnInvolution) {
    EXPECT_EQ(complement(Nucleotide::A), Nucleotide::T);
    EXPECT_EQ(complement(Nucleotide::T), Nucleotide::A);
    EXPECT_EQ(complement(Nucleotide::C), Nucleotide::G);
    EXPECT_EQ(complement(Nucleotide::G), Nucleotide::C);
    for (auto b : kAlphabet) EXPECT_EQ(complement(complement(b)), b);
}

TEST(ParseFasta, MinimalRecord) {
    const auto recs = parse_fasta(">s1\nACGT\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].id(), "s1");
    EXPECT_EQ(recs[0].to_string(), "ACGT");
    EXPECT_EQ(recs[0].skipped_positions(), 0u);
    EXPECT_EQ(recs[0].topology(), Topology::circular);
}

TEST(ParseFasta, SkipPolicyDropsAmbiguousSymbols) {
    const auto recs = parse_fasta(">s1\nACNGT\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].to_string(), "ACGT");
    EXPECT_EQ(recs[0].skipped_positions(), 1u);
}

TEST(ParseFasta, MultipleRecordsInFileOrder) {
    const auto recs = parse_fasta(">a\nAC\n>b\nGT\n");
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].id(), "a");
    EXPECT_EQ(recs[0].to_string(), "AC");
    EXPECT_EQ(recs[1].id(), "b");
    EXPECT_EQ(recs[1].to_string(), "GT");
}

TEST(ParseFasta, LowercaseWhitespaceAndCrlf) {
    const auto recs = parse_fasta(">chr1 some description\r\nac gt\r\n\r\nTT\tA\r\n");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].id(), "chr1 some description");
    EXPECT_EQ(recs[0].to_string(), "ACGTTTA");
}

TEST(ParseFasta, EmptyInputGivesNoRecords) {
    EXPECT_TRUE(parse_fasta("").empty());
    EXPECT_TRUE(parse_fasta("\n\n").empty());
}

TEST(ParseFasta, DataBeforeHeaderIsAFormatError) {
    EXPECT_THROW(parse_fasta("ACGT\n>s\nAC\n"), FormatError);
}

TEST(ParseFasta, StrictPolicyReportsPosition) {
    IngestionPolicy strict;
    strict.ambiguity = AmbiguityPolicy::error;
    try {
        parse_fasta(">s\nAC\nGRT\n", strict);
        FAIL() << "expected ContentError";
    } catch (const ContentError& e) {
        EXPECT_EQ(e.position(), 3u);
    }
}

TEST(ParseFasta, DefaultTopologyFollowsPolicy) {
    IngestionPolicy linear;
    linear.default_topology = Topology::linear;
    EXPECT_EQ(parse_fasta(">s\nACGT\n", linear)[0].topology(), Topology::linear);
}

TEST(ParseFasta, WriteParseRoundTrip) {
    std::mt19937_64 gen(42);
    for (int trial = 0; trial < 50; ++trial) {
        const auto len = 1 + gen() % 500;
        const auto text = oracle::random_bases(len, gen);
        const auto s = Sequence::from_string(text, Topology::circular, "rec" + std::to_string(trial));
        std::ostringstream out;
        write_fasta(out, s, 1 + gen() % 90);
        const auto back = parse_fasta(out.str());
        ASSERT_EQ(back.size(), 1u);
        EXPECT_EQ(back[0], s);
    }
}

TEST(GcContent, Examples) {
    EXPECT_DOUBLE_EQ(gc_content(Sequence::from_string("ACGT")), 0.5);
    EXPECT_DOUBLE_EQ(gc_content(Sequence::from_string("AAAA")), 0.0);
    EXPECT_DOUBLE_EQ(gc_content(Sequence::from_string("GGCCGC")), 1.0);
}

TEST(GcContent, EmptySequenceIsADomainError) {
    EXPECT_THROW(gc_content(Sequence{}), DomainError);
}

TEST(ReverseComplement, Examples) {
    EXPECT_EQ(reverse_complement(Sequence::from_string("ACGT")).to_string(), "ACGT");
    EXPECT_EQ(reverse_complement(Sequence::from_string("AACC")).to_string(), "GGTT");
}

TEST(ReverseComplement, InvolutionAndGcInvariance) {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto text = oracle::random_bases(1 + gen() % 200, gen);
        const auto s = Sequence::from_string(text);
        const auto rc = reverse_complement(s);
        EXPECT_EQ(rc.to_string(), oracle::reverse_complement(text));
        EXPECT_EQ(reverse_complement(rc), s);
        EXPECT_DOUBLE_EQ(gc_content(rc), gc_content(s));
    }
}

TEST(Sequence, FromStringRejectsAmbiguity) {
    EXPECT_THROW(Sequence::from_string("ACNT"), DomainError);
}
