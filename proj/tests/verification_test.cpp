#include <gtest/gtest.h>

#include "foldscope/verification.hpp"
#include "oracle.hpp"

using namespace foldscope;

namespace {

// Scan that never records a factor at 4*phi(n); such a factor is then
// attributed to its next occurrence.
FactorScan scan_skipping_four_phi(const FoldingInstructions& f, std::size_t n) {
  FactorScan scan = scan_factors(f, n);
  const auto p = static_cast<std::size_t>(phi(n));
  std::vector<std::size_t> starts;
  std::set<std::string> kept;
  for (std::size_t i = 1; i <= scan.horizon; ++i) {
    if (i == 4 * p) continue;
    if (kept.insert(std::string(scan.factor_text(i))).second) starts.push_back(i);
  }
  scan.first_starts = starts;
  return scan;
}

std::size_t swapped_prediction(const FoldingInstructions& f, std::size_t n) {
  const std::size_t p = static_cast<std::size_t>(phi(n));
  return predicted_s(f, n) == 4 * p ? 6 * p : 4 * p;
}

}  // namespace

TEST(InstructionCases, ExhaustiveAndSampled) {
  const auto all = instruction_cases(3, Sampling::exhaustive());
  ASSERT_EQ(all.size(), 8u);
  EXPECT_EQ(all[0].str(), "+++");
  EXPECT_EQ(all[1].str(), "-++");
  EXPECT_EQ(all[7].str(), "---");

  const auto sampled = instruction_cases(6, Sampling::sampled(10, 3), 7);
  ASSERT_EQ(sampled.size(), 14u);
  EXPECT_EQ(sampled[0].str(), "++++++");
  EXPECT_EQ(sampled[1].str(), "------");
  EXPECT_EQ(sampled[2].str(), "+-+-+-");
  EXPECT_EQ(sampled[3].str(), "-+-+-+");
  const auto again = instruction_cases(6, Sampling::sampled(10, 3), 7);
  EXPECT_EQ(sampled, again);
  EXPECT_THROW(instruction_cases(17, Sampling::exhaustive()), DomainError);
  EXPECT_EQ(instruction_cases(2, Sampling::exhaustive(), 0, true)[1].str(), ";-+");
}

TEST(VerificationDepth, CoversTheScan) {
  EXPECT_EQ(verification_depth(7), 7u);
  EXPECT_EQ(verification_depth(64), 10u);
  EXPECT_EQ(verification_depth(128), 11u);
}

TEST(FormulaVsDfao, Passes) {
  const auto o = verify_formula_vs_dfao(256, 9);
  EXPECT_TRUE(o.passed());
  EXPECT_EQ(o.cases, 512u);
  EXPECT_EQ(o.mode, EnumerationMode::exhaustive);
  EXPECT_TRUE(verify_formula_vs_dfao(8, 4).passed());
  EXPECT_THROW(verify_formula_vs_dfao(256, 8), DomainError);
}

TEST(FormulaVsDfao, CorruptedAutomatonFails) {
  const auto mutant = build_pf_evaluator().with_transition(1, 0, 0);
  const auto o = verify_formula_vs_dfao(64, 7, Sampling::exhaustive(), mutant);
  ASSERT_FALSE(o.passed());
  EXPECT_FALSE(o.counterexample->instructions.empty());
  EXPECT_GE(o.counterexample->n, 1u);
}

TEST(Bounds, SmallRanges) {
  const auto o = verify_bounds(3, 20);
  EXPECT_TRUE(o.passed()) << o.counterexample->details;
  EXPECT_TRUE(verify_bounds(7, 7).passed());
  EXPECT_TRUE(verify_bounds(3, 6).passed());
  EXPECT_THROW(verify_bounds(2, 6), DomainError);
}

TEST(Bounds, ExtremesAtSeven) {
  // Independent: oracle over all 128 periodic 7-bit patterns.
  std::size_t lo = 1000, hi = 0;
  for (std::uint64_t i = 0; i < 128; ++i) {
    std::vector<int> bits(7);
    for (int j = 0; j < 7; ++j) bits[j] = ((i >> j) & 1) ? -1 : 1;
    const std::size_t s = oracle::start_function(oracle::periodic(bits), 7);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  EXPECT_EQ(hi, 48u);
  EXPECT_EQ(lo, 32u);
}

TEST(Bounds, BrokenScanFails) {
  Harness h;
  h.scan = [](const FoldingInstructions& f, std::size_t n) {
    auto s = scan_factors(f, n);
    s.first_starts.pop_back();
    return s;
  };
  EXPECT_FALSE(verify_bounds(3, 8, Sampling::exhaustive(), h).passed());
}

TEST(LemmaFirstOccurrence, Passes) {
  EXPECT_TRUE(verify_lemma_first_occurrence(7, 16).passed());
  EXPECT_THROW(verify_lemma_first_occurrence(6, 16), DomainError);
}

TEST(LemmaFirstOccurrence, RegularSevenOccurrences) {
  // oracle: the factor at 48 occurs only at 48 for the regular fold,
  // and at both 32 and 48 for +;+-
  auto occurrences = [](const oracle::Instr& f) {
    const auto w = oracle::unfold(f, 54);
    std::vector<std::size_t> at;
    for (std::size_t i = 0; i < 48; ++i)
      if (std::equal(w.begin() + i, w.begin() + i + 7, w.begin() + 47)) at.push_back(i + 1);
    return at;
  };
  EXPECT_EQ(occurrences(oracle::constant(1)), (std::vector<std::size_t>{48}));
  EXPECT_EQ(occurrences([](std::size_t s) { return s == 0 || (s - 1) % 2 == 0 ? 1 : -1; }),
            (std::vector<std::size_t>{32, 48}));
  EXPECT_EQ(scan_factors(FoldingInstructions::regular(), 7).s_value(), 48u);
  EXPECT_EQ(scan_factors(FoldingInstructions::parse("+;+-"), 7).s_value(), 32u);
}

TEST(LemmaLastFactor, Passes) {
  EXPECT_TRUE(verify_lemma_last_factor(7, 16).passed());
  const auto r = scan_factors(FoldingInstructions::regular(), 8);
  EXPECT_EQ(r.s_value(), 48u);
}

TEST(LemmaLastFactor, MutatedScanFails) {
  Harness h;
  h.scan = scan_skipping_four_phi;
  const auto o = verify_lemma_last_factor(7, 16, Sampling::exhaustive(), h);
  ASSERT_FALSE(o.passed());
  EXPECT_EQ(o.counterexample->n, 7u);
  EXPECT_EQ(o.counterexample->computed, 48);
  EXPECT_EQ(o.counterexample->expected, 32);
}

TEST(LemmaSharedStart, Passes) {
  EXPECT_TRUE(verify_lemma_shared_start(7, 16).passed());
  EXPECT_TRUE(verify_lemma_shared_start(8, 8).passed());
  EXPECT_TRUE(verify_lemma_shared_start(9, 9).passed());
}

TEST(LemmaSharedStart, NineFrozenValues) {
  // oracle values: 96 for the regular fold, 64 for +;+-
  for (auto [f, want] : {std::pair{FoldingInstructions::regular(), std::size_t{96}},
                         std::pair{FoldingInstructions::parse("+;+-"), std::size_t{64}}}) {
    const std::string w = pf_prefix_text(f, 111);
    EXPECT_EQ(w.find(w.substr(95, 9)) + 1, want);
    EXPECT_EQ(w.find(w.substr(95, 16)) + 1, want);
  }
}

TEST(Theorem, ExhaustiveSmallRange) {
  const auto o = verify_theorem(7, 24);
  EXPECT_TRUE(o.passed()) << o.counterexample->details;
  EXPECT_GT(o.cases, 0u);
}

TEST(Theorem, SampledRange) {
  const auto o = verify_theorem(65, 70, Sampling::sampled(20, 4));
  EXPECT_TRUE(o.passed());
  EXPECT_EQ(o.cases, 6u * 24u);
  ASSERT_TRUE(o.seed.has_value());
  EXPECT_EQ(*o.seed, 4u);
}

TEST(Theorem, SwappedBranchesFail) {
  Harness h;
  h.predict = swapped_prediction;
  const auto o = verify_theorem(7, 16, Sampling::exhaustive(), h);
  ASSERT_FALSE(o.passed());
  EXPECT_EQ(o.counterexample->n, 7u);
  EXPECT_EQ(o.counterexample->instructions, "+++++++");
}

TEST(Theorem, DependenceCheckCatchesExtraBit) {
  Harness h;
  h.scan = [](const FoldingInstructions& f, std::size_t n) {
    auto s = scan_factors(f, n);
    if (f.at(0) == Sign::minus) s.first_starts.push_back(s.first_starts.back() + 1);
    return s;
  };
  h.predict = [base = h.scan](const FoldingInstructions& f, std::size_t n) { return base(f, n).s_value(); };
  const auto o = verify_theorem(7, 8, Sampling::exhaustive(), h);
  ASSERT_FALSE(o.passed());
  EXPECT_NE(o.counterexample->details.find("other than"), std::string::npos);
}

TEST(Theorem, RejectsDomain) {
  EXPECT_THROW(verify_theorem(6, 10), DomainError);
}

TEST(CorollaryTails, Passes) {
  const auto o = verify_corollary_tails(7, 32);
  EXPECT_TRUE(o.passed()) << o.counterexample->details;
}

TEST(CorollaryTails, ExamplesAndMixedTail) {
  for (std::size_t n = 7; n <= 64; n += 7) {
    const auto p = static_cast<std::size_t>(phi(n));
    EXPECT_EQ(s_value(FoldingInstructions::parse("++++;+-"), n), 4 * p);
    EXPECT_EQ(s_value(FoldingInstructions::parse("----;-"), n), 6 * p);
  }
  // branches of +;++- over n = 7,8,9,16,17,32,33,64, frozen from the oracle
  const std::vector<std::size_t> ns{7, 8, 9, 16, 17, 32, 33, 64};
  const std::vector<std::size_t> branch{6, 6, 4, 4, 4, 4, 6, 6};
  const auto f = FoldingInstructions::parse("+;++-");
  for (std::size_t i = 0; i < ns.size(); ++i) EXPECT_EQ(s_value(f, ns[i]), branch[i] * phi(ns[i]));
}

TEST(CorollaryTails, WrongBranchFails) {
  Harness h;
  h.scan = [](const FoldingInstructions& f, std::size_t n) {
    auto s = scan_factors(f, n);
    if (f.tail_period() && f.tail_period()->size() == 1) s.first_starts.back() = 4 * phi(n);
    return s;
  };
  EXPECT_FALSE(verify_corollary_tails(7, 16, h).passed());
}

TEST(Monotonicity, Passes) {
  const auto o = verify_monotonicity_and_symmetry(8, 16);
  EXPECT_TRUE(o.passed()) << o.counterexample->details;
  EXPECT_EQ(o.cases, 256u);
  EXPECT_TRUE(verify_monotonicity_and_symmetry(14, 24, Sampling::sampled(100, 8)).passed());
}

TEST(Monotonicity, RegularPrefix) {
  std::vector<std::size_t> s;
  for (std::size_t n = 1; n <= 7; ++n) s.push_back(s_value(FoldingInstructions::regular(), n));
  EXPECT_EQ(s, (std::vector<std::size_t>{3, 6, 22, 22, 48, 48, 48}));
}

TEST(Monotonicity, BrokenScanFails) {
  Harness h;
  h.scan = [](const FoldingInstructions& f, std::size_t n) {
    auto s = scan_factors(f, n);
    if (n == 5) s.first_starts.back() = 1;
    return s;
  };
  EXPECT_FALSE(verify_monotonicity_and_symmetry(4, 8, Sampling::exhaustive(), h).passed());
}

TEST(Outcome, DeterministicAndCounted) {
  const auto a = verify_bounds(3, 10);
  const auto b = verify_bounds(3, 10);
  EXPECT_EQ(a.cases, b.cases);
  // 2 n-values at depth 6, 4 at depth 7
  EXPECT_EQ(verify_bounds(3, 8).cases, 2u * 64 + 4u * 128);
}
