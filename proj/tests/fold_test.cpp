#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "foldscope/fold.hpp"
#include "foldscope/instructions.hpp"
#include "oracle.hpp"

using namespace foldscope;

namespace {

std::vector<int> ints(const SignWord& w) {
  std::vector<int> out;
  for (Sign s : w.values()) out.push_back(to_int(s));
  return out;
}

}  // namespace

TEST(Instructions, MakeValidatesAlphabet) {
  const std::vector<int> one{1};
  const auto regular = make_instructions(one, std::span<const int>(one));
  for (std::size_t s = 0; s < 40; ++s) EXPECT_EQ(regular.at(s), Sign::plus);
  EXPECT_FALSE(regular.accessible_count().has_value());

  const std::vector<int> two{1, -1};
  const auto finite = make_instructions(two);
  ASSERT_TRUE(finite.accessible_count().has_value());
  EXPECT_EQ(*finite.accessible_count(), 2u);

  const std::vector<int> zero{0};
  EXPECT_THROW(make_instructions(one, std::span<const int>(zero)), DomainError);
  const std::vector<int> empty;
  EXPECT_THROW(make_instructions(one, std::span<const int>(empty)), DomainError);
}

TEST(Instructions, PeriodArithmetic) {
  const auto f = FoldingInstructions::parse("+-;+-");
  EXPECT_EQ(f.at(3), Sign::minus);
  EXPECT_EQ(f.at(2), Sign::plus);
  EXPECT_EQ(f.at(1001), Sign::minus);

  const auto g = FoldingInstructions::parse("++-;+-");
  EXPECT_EQ(g.at(2), Sign::minus);
  EXPECT_EQ(g.at(3), Sign::plus);
  EXPECT_EQ(g.at(4), Sign::minus);
}

TEST(Instructions, ExhaustionIsAnError) {
  const auto f = FoldingInstructions::parse("+-");
  try {
    (void)f.at(2);
    FAIL() << "expected InstructionExhausted";
  } catch (const InstructionExhausted& e) {
    EXPECT_EQ(e.index(), 2u);
  }
}

TEST(Instructions, ParseAndRender) {
  for (const char* text : {"+;+", "++-;+-", "+-+-", ";-+", "-"}) {
    EXPECT_EQ(FoldingInstructions::parse(text).str(), text);
  }
  EXPECT_THROW(FoldingInstructions::parse(""), ParseError);
  EXPECT_THROW(FoldingInstructions::parse("+;"), ParseError);
  EXPECT_THROW(FoldingInstructions::parse("+;+;+"), ParseError);
  EXPECT_THROW(FoldingInstructions::parse("+0"), ParseError);
}

TEST(Instructions, Negate) {
  const auto f = FoldingInstructions::parse("+-");
  EXPECT_EQ(negate(f).str(), "-+");
  EXPECT_EQ(negate(FoldingInstructions::regular()).str(), ";-");
  const auto g = FoldingInstructions::parse("++-;+--");
  EXPECT_EQ(negate(negate(g)), g);
}

TEST(PfValue, RegularPrefix) {
  const auto f = FoldingInstructions::regular();
  EXPECT_EQ(pf_value(f, 6), Sign::minus);
  const std::vector<int> expected{1, 1, -1, 1, 1, -1, -1, 1};
  EXPECT_EQ(ints(pf_prefix(f, 8)), expected);
  EXPECT_EQ(pf_value(negate(f), 3), Sign::plus);
  EXPECT_THROW(pf_value(f, 0), DomainError);
}

TEST(PfValue, AlternatingPrefix) {
  // frozen from the unfolding oracle
  EXPECT_EQ(pf_prefix(FoldingInstructions::parse(";+-"), 8).str(), "+--+++--");
  EXPECT_EQ(pf_prefix(FoldingInstructions::parse(";+-"), 8).str(),
            [] {
              std::string s;
              for (int v : oracle::unfold([](std::size_t m) { return m % 2 == 0 ? 1 : -1; }, 8)) s += v > 0 ? '+' : '-';
              return s;
            }());
}

TEST(PfValue, FirstTermIsF0) {
  EXPECT_EQ(pf_prefix(FoldingInstructions::parse("-"), 1).str(), "-");
  EXPECT_EQ(pf_prefix(FoldingInstructions::parse("+"), 1).str(), "+");
}

TEST(PfValue, ExhaustionNamesFirstMissingInstruction) {
  const auto f = FoldingInstructions::parse("+-");
  try {
    (void)pf_prefix(f, 8);
    FAIL() << "expected InstructionExhausted";
  } catch (const InstructionExhausted& e) {
    EXPECT_EQ(e.index(), 2u);
    EXPECT_NE(std::string(e.what()).find("f_2"), std::string::npos);
  }
  EXPECT_NO_THROW(pf_prefix(f, 3));
}

TEST(RequiredInstructionCount, Values) {
  EXPECT_EQ(required_instruction_count(8), 4u);
  EXPECT_EQ(required_instruction_count(1), 1u);
  EXPECT_EQ(required_instruction_count(48), 6u);
  EXPECT_EQ(required_instruction_count(7), 3u);
}

TEST(PfValue, MatchesUnfoldingOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> bits(14);
    for (auto& b : bits) b = (rng() & 1) ? 1 : -1;
    std::vector<Sign> signs;
    for (int b : bits) signs.push_back(sign_from_int(b));
    const FoldingInstructions f(signs);
    const auto expected = oracle::unfold(oracle::from_bits(bits), (1u << 14) - 1);
    EXPECT_EQ(ints(pf_prefix(f, (1u << 14) - 1)), expected);
  }
}

TEST(PfValue, NegationFlipsEveryTerm) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Sign> bits(17);
    for (auto& b : bits) b = (rng() & 1) ? Sign::plus : Sign::minus;
    const FoldingInstructions f(bits);
    const auto g = negate(f);
    for (std::uint64_t k = 1; k <= (1u << 16); ++k) ASSERT_EQ(pf_value(g, k), -pf_value(f, k)) << k;
  }
}

TEST(PfValue, DependsOnlyOnTwoAdicValuation) {
  std::vector<Sign> base(12, Sign::plus);
  const FoldingInstructions f(base);
  for (std::uint64_t k = 1; k < 4096; ++k) {
    const auto s = static_cast<std::size_t>(std::countr_zero(k));
    for (std::size_t t = 0; t < 12; ++t) {
      auto flipped = base;
      flipped[t] = Sign::minus;
      const bool same = pf_value(FoldingInstructions(flipped), k) == pf_value(f, k);
      EXPECT_EQ(same, t != s) << "k=" << k << " t=" << t;
    }
  }
}

TEST(SignWord, OneBasedSlices) {
  const auto w = SignWord::parse("++-++--+");
  EXPECT_EQ(w[1], Sign::plus);
  EXPECT_EQ(w[3], Sign::minus);
  EXPECT_EQ(w.slice(3, 5).str(), "-++");
  EXPECT_EQ(w.slice(8, 8).str(), "+");
  EXPECT_THROW(w.slice(0, 2), DomainError);
  EXPECT_THROW(w.slice(4, 3), DomainError);
  EXPECT_THROW(w.slice(2, 9), DomainError);
  EXPECT_THROW(w.at(9), DomainError);
  EXPECT_LT(SignWord::parse("-+"), SignWord::parse("+-"));
}

TEST(Factor, Invariants) {
  EXPECT_THROW(Factor(SignWord(), 1), DomainError);
  EXPECT_THROW(Factor(SignWord::parse("+"), 0), DomainError);
  EXPECT_EQ(Factor(SignWord::parse("+-"), 3).first_start, 3u);
}
