#include <gtest/gtest.h>

#include <random>

#include "foldscope/appearance.hpp"
#include "oracle.hpp"

using namespace foldscope;

namespace {

FoldingInstructions instr(const char* text) { return FoldingInstructions::parse(text); }

FoldingInstructions random_prefix(std::mt19937_64& rng, std::size_t len) {
  std::vector<Sign> bits(len);
  for (auto& b : bits) b = (rng() & 1) ? Sign::plus : Sign::minus;
  return FoldingInstructions(bits);
}

oracle::Instr as_oracle(const FoldingInstructions& f) {
  return [f](std::size_t s) { return to_int(f.at(s)); };
}

}  // namespace

TEST(Phi, Values) {
  EXPECT_EQ(phi(7), 8u);
  EXPECT_EQ(phi(8), 8u);
  EXPECT_EQ(phi(9), 16u);
  EXPECT_EQ(phi(1), 1u);
  EXPECT_THROW(phi(0), DomainError);
  EXPECT_EQ(phi_exponent(100), 7u);
}

TEST(DistinctFactors, RegularFold) {
  const auto one = distinct_factors(FoldingInstructions::regular(), 1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one.at(SignWord::parse("+")), 1u);
  EXPECT_EQ(one.at(SignWord::parse("-")), 3u);

  const auto two = distinct_factors(FoldingInstructions::regular(), 2);
  ASSERT_EQ(two.size(), 4u);
  std::set<std::size_t> starts;
  for (const auto& [w, s] : two) starts.insert(s);
  EXPECT_EQ(starts, (std::set<std::size_t>{1, 2, 3, 6}));
  // lexicographic, minus first
  EXPECT_EQ(two.begin()->first.str(), "--");
}

TEST(DistinctFactors, ComplexityStaysBelowFourN) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_prefix(rng, 14);
    for (std::size_t n = 1; n <= 40; ++n) EXPECT_LE(distinct_factors(f, n).size(), 4 * n);
  }
}

TEST(DistinctFactors, CountMatchesOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_prefix(rng, 14);
    for (std::size_t n = 1; n <= 12; ++n) EXPECT_EQ(scan_factors(f, n).factor_count(), oracle::factor_count(as_oracle(f), n));
  }
}

TEST(SValue, Examples) {
  const auto regular = FoldingInstructions::regular();
  EXPECT_EQ(s_value(regular, 7), 48u);
  EXPECT_EQ(s_value(regular, 1), 3u);
  EXPECT_EQ(s_value(instr("+-;+"), 1), 2u);
  EXPECT_EQ(a_value(regular, 7), 54u);
  EXPECT_EQ(a_value(regular, 1), 3u);
  const auto g = instr("+-;+");
  EXPECT_EQ(a_value(g, 2), s_value(g, 2) + 1);
}

TEST(SValue, RegularFoldFrozenSequence) {
  // computed with the unfolding oracle
  const std::vector<std::size_t> expected{3, 6, 22, 22, 48, 48, 48, 48, 96, 96, 96, 96, 96, 96, 96, 96};
  for (std::size_t n = 1; n <= expected.size(); ++n) {
    EXPECT_EQ(s_value(FoldingInstructions::regular(), n), expected[n - 1]) << n;
    EXPECT_EQ(oracle::start_function(oracle::constant(1), n), expected[n - 1]) << n;
  }
}

TEST(SValue, MatchesOracleOnRandomInstructions) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 12; ++trial) {
    const auto f = random_prefix(rng, 14);
    for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(s_value(f, n), oracle::start_function(as_oracle(f), n)) << f.str() << " n=" << n;
  }
}

TEST(SValue, ExhaustionPropagates) {
  EXPECT_THROW(s_value(instr("++++"), 7), InstructionExhausted);
}

TEST(SValue, MonotoneAndNegationInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_prefix(rng, 16);
    std::size_t prev = 0;
    for (std::size_t n = 1; n <= 64; ++n) {
      const std::size_t s = s_value(f, n);
      EXPECT_GE(s, prev);
      EXPECT_EQ(s, s_value(negate(f), n));
      const auto p = static_cast<std::size_t>(phi(n));
      if (n >= 3) {
        EXPECT_LE(s, 6 * p);
      }
      if (n >= 7) {
        EXPECT_GE(s, 4 * p);
      }
      prev = s;
    }
  }
}

TEST(SValue, ConstantOnPowerOfTwoBlocks) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_prefix(rng, 16);
    for (std::size_t top = 16; top <= 128; top *= 2) {
      const std::size_t first = s_value(f, top / 2 + 1);
      for (std::size_t n = top / 2 + 2; n <= top; n += 5) EXPECT_EQ(s_value(f, n), first);
      EXPECT_EQ(s_value(f, top), first);
    }
  }
}

TEST(AppearanceReport, RegularSeven) {
  const auto r = appearance_report(FoldingInstructions::regular(), 7);
  EXPECT_EQ(r.s_value, 48u);
  EXPECT_EQ(r.a_value, 54u);
  EXPECT_EQ(r.phi_n, 8u);
  EXPECT_EQ(r.last_factor.first_start, r.s_value);
  EXPECT_EQ(r.last_factor.word, pf_prefix(FoldingInstructions::regular(), 54).slice(48, 54));
  EXPECT_EQ(r.factor_count, 28u);
  EXPECT_EQ(r.horizon_used, 96u);
}

TEST(AppearanceReport, AlternatingTail) {
  const auto r = appearance_report(instr("+;+-"), 8);
  EXPECT_EQ(r.s_value, 32u);
  EXPECT_EQ(r.a_value, 39u);
}

TEST(AppearanceReport, RegularThree) {
  const auto r = appearance_report(FoldingInstructions::regular(), 3);
  EXPECT_EQ(r.s_value, 22u);
  EXPECT_EQ(r.a_value, r.s_value + 2);
}

TEST(Predicted, Examples) {
  const auto regular = FoldingInstructions::regular();
  EXPECT_EQ(predicted_s(regular, 7), 48u);
  EXPECT_EQ(predicted_s(instr("+;+-"), 100), 512u);
  EXPECT_THROW(predicted_s(regular, 6), DomainError);
  EXPECT_EQ(predicted_a(regular, 7), 54u);
  EXPECT_EQ(predicted_a(instr("+;+-"), 8), 39u);
  EXPECT_EQ(predicted_a(regular, 128), 895u);
  EXPECT_THROW(predicted_s(instr("+++++"), 7), InstructionExhausted);
}

TEST(Predicted, AgreesWithScan) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_prefix(rng, 16);
    for (std::size_t n = 7; n <= 128; n += 3) EXPECT_EQ(s_value(f, n), predicted_s(f, n)) << f.str() << " n=" << n;
  }
}
