#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "foldscope/appearance.hpp"
#include "foldscope/dfao.hpp"
#include "foldscope/error.hpp"
#include "foldscope/fold.hpp"
#include "foldscope/instructions.hpp"
#include "foldscope/parallel.hpp"

namespace foldscope {

enum class EnumerationMode { exhaustive, sampled };

inline std::string to_string(EnumerationMode m) { return m == EnumerationMode::exhaustive ? "exhaustive" : "sampled"; }

/// How instruction prefixes are chosen for a check. Sampled runs always add
/// the constant and alternating prefixes of both signs to the random draws.
struct Sampling {
  EnumerationMode mode = EnumerationMode::exhaustive;
  std::size_t samples = 200;
  std::uint64_t seed = 1;

  static Sampling exhaustive() { return {}; }
  static Sampling sampled(std::size_t samples, std::uint64_t seed) {
    return {EnumerationMode::sampled, samples, seed};
  }
};

inline constexpr std::size_t kMaxExhaustiveDepth = 16;

/// Free instruction bits enumerated for factor length n: enough for the
/// scan's first doubling check, i.e. P_f[1 : 12*phi(n) + n].
inline std::size_t verification_depth(std::size_t n) {
  return required_instruction_count(12 * phi(n) + n);
}

/// Finite instruction prefix f_0..f_{depth-1}; bit j of index set means f_j = -1.
/// Index 0 is the all-plus prefix.
inline std::vector<Sign> pattern_from_index(std::size_t depth, std::uint64_t index) {
  std::vector<Sign> bits(depth);
  for (std::size_t j = 0; j < depth; ++j) bits[j] = ((index >> j) & 1u) ? Sign::minus : Sign::plus;
  return bits;
}

/// Instruction patterns for one check. Exhaustive mode yields all 2^depth
/// patterns in index order. With `periodic`, each pattern repeats forever
/// instead of ending after depth entries.
inline std::vector<FoldingInstructions> instruction_cases(std::size_t depth, const Sampling& sampling,
                                                          std::uint64_t salt = 0, bool periodic = false) {
  if (depth == 0) throw DomainError("instruction depth must be positive");
  auto wrap = [&](std::vector<Sign> bits) {
    return periodic ? FoldingInstructions::periodic(std::move(bits)) : FoldingInstructions(std::move(bits));
  };
  std::vector<FoldingInstructions> out;
  if (sampling.mode == EnumerationMode::exhaustive) {
    if (depth > kMaxExhaustiveDepth)
      throw DomainError("exhaustive enumeration limited to " + std::to_string(kMaxExhaustiveDepth) +
                        " free bits, need " + std::to_string(depth));
    const std::uint64_t total = std::uint64_t{1} << depth;
    out.reserve(total);
    for (std::uint64_t i = 0; i < total; ++i) out.push_back(wrap(pattern_from_index(depth, i)));
    return out;
  }

  auto fill = [&](auto rule) {
    std::vector<Sign> bits(depth);
    for (std::size_t j = 0; j < depth; ++j) bits[j] = rule(j);
    out.push_back(wrap(std::move(bits)));
  };
  fill([](std::size_t) { return Sign::plus; });
  fill([](std::size_t) { return Sign::minus; });
  fill([](std::size_t j) { return j % 2 == 0 ? Sign::plus : Sign::minus; });
  fill([](std::size_t j) { return j % 2 == 0 ? Sign::minus : Sign::plus; });
  std::seed_seq seq{static_cast<std::uint32_t>(sampling.seed), static_cast<std::uint32_t>(sampling.seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  std::mt19937_64 rng(seq);
  for (std::size_t i = 0; i < sampling.samples; ++i) {
    std::vector<Sign> bits(depth);
    std::uint64_t pool = 0;
    for (std::size_t j = 0; j < depth; ++j) {
      if (j % 64 == 0) pool = rng();
      bits[j] = ((pool >> (j % 64)) & 1u) ? Sign::minus : Sign::plus;
    }
    out.push_back(wrap(std::move(bits)));
  }
  return out;
}

struct Counterexample {
  std::string instructions;
  /// Factor length, or k for the formula/automaton check.
  std::size_t n = 0;
  std::string details;
  std::optional<std::int64_t> computed;
  std::optional<std::int64_t> expected;
  std::string factor;
};

struct VerificationOutcome {
  std::string claim_id;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  std::size_t instruction_depth = 0;
  EnumerationMode mode = EnumerationMode::exhaustive;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
  std::uint64_t cases = 0;
  std::optional<Counterexample> counterexample;

  bool passed() const noexcept { return !counterexample; }
};

/// Replaceable pieces of the checks. Tests swap in broken versions to confirm
/// that the checks can fail.
struct Harness {
  std::function<FactorScan(const FoldingInstructions&, std::size_t)> scan = scan_factors;
  std::function<std::size_t(const FoldingInstructions&, std::size_t)> predict = predicted_s;
};

namespace detail {

inline VerificationOutcome start_outcome(std::string claim, std::size_t lo, std::size_t hi, const Sampling& sampling) {
  VerificationOutcome out;
  out.claim_id = std::move(claim);
  out.n_lo = lo;
  out.n_hi = hi;
  out.mode = sampling.mode;
  if (sampling.mode == EnumerationMode::sampled) {
    out.samples = sampling.samples;
    out.seed = sampling.seed;
  }
  return out;
}

inline void require_range(std::size_t lo, std::size_t hi, std::size_t min_lo, const char* why) {
  if (lo < min_lo) throw DomainError(std::string(why) + " requires n >= " + std::to_string(min_lo));
  if (hi < lo) throw DomainError("empty range: n_hi < n_lo");
}

inline Counterexample failure(const FoldingInstructions& f, std::size_t n, std::string details,
                              std::optional<std::int64_t> computed = std::nullopt,
                              std::optional<std::int64_t> expected = std::nullopt, std::string factor = {}) {
  return Counterexample{f.str(), n, std::move(details), computed, expected, std::move(factor)};
}

/// Runs `check` on every case for every n in [lo, hi]; stops at the first n
/// with a failure and keeps the failing case with the smallest index.
template <class Check>
void for_each_case(VerificationOutcome& out, const Sampling& sampling, bool periodic, Check&& check) {
  for (std::size_t n = out.n_lo; n <= out.n_hi; ++n) {
    const std::size_t depth = verification_depth(n);
    out.instruction_depth = std::max(out.instruction_depth, depth);
    const auto cases = instruction_cases(depth, sampling, n, periodic);
    auto results = parallel_map(cases.size(), [&](std::size_t i) { return check(cases[i], n); });
    out.cases += cases.size();
    for (auto& r : results) {
      if (r) {
        out.counterexample = std::move(r);
        return;
      }
    }
  }
}

inline std::size_t first_occurrence(const std::string& word, std::string_view factor) {
  const auto pos = word.find(factor);
  return pos == std::string::npos ? 0 : pos + 1;
}

}  // namespace detail

/// Closed formula against the automaton for every k <= k_bound. Patterns of
/// `depth` bits are repeated periodically to fill the instruction track.
inline VerificationOutcome verify_formula_vs_dfao(std::uint64_t k_bound, std::size_t depth,
                                                  const Sampling& sampling = Sampling::exhaustive(),
                                                  const ParallelDFAO& dfao = build_pf_evaluator()) {
  if (k_bound == 0) throw DomainError("k_bound must be positive");
  if (depth < required_instruction_count(k_bound))
    throw DomainError("depth " + std::to_string(depth) + " below the " +
                      std::to_string(required_instruction_count(k_bound)) + " instructions needed for k <= " +
                      std::to_string(k_bound));
  Sampling effective = sampling;
  if (effective.mode == EnumerationMode::exhaustive && depth > kMaxExhaustiveDepth)
    effective = Sampling::sampled(sampling.samples, sampling.seed);
  auto out = detail::start_outcome("formula-dfao", 1, static_cast<std::size_t>(k_bound), effective);
  out.instruction_depth = depth;
  const auto streams = instruction_cases(depth, effective, 0, true);
  const auto report = equivalence_check_streams(dfao, k_bound, streams);
  out.cases = streams.size();
  if (const auto& w = report.counterexample) {
    out.counterexample = Counterexample{
        w->instructions, static_cast<std::size_t>(w->k), w->describe(),
        w->actual ? std::optional<std::int64_t>(to_int(*w->actual)) : std::nullopt, to_int(w->expected), {}};
  }
  return out;
}

/// max_f S_f(n) = 6*phi(n) for n >= 3, min_f S_f(n) = 4*phi(n) for n >= 7;
/// both extremes must be attained by some enumerated prefix.
inline VerificationOutcome verify_bounds(std::size_t n_lo, std::size_t n_hi,
                                         const Sampling& sampling = Sampling::exhaustive(),
                                         const Harness& harness = {}) {
  detail::require_range(n_lo, n_hi, 3, "the upper bound");
  auto out = detail::start_outcome("bounds", n_lo, n_hi, sampling);
  for (std::size_t n = n_lo; n <= n_hi && out.passed(); ++n) {
    const std::size_t depth = verification_depth(n);
    out.instruction_depth = std::max(out.instruction_depth, depth);
    const auto cases = instruction_cases(depth, sampling, n);
    const auto values = parallel_map(cases.size(), [&](std::size_t i) { return harness.scan(cases[i], n).s_value(); });
    out.cases += cases.size();
    const auto p = static_cast<std::int64_t>(phi(n));
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const auto& arg_max = cases[static_cast<std::size_t>(hi_it - values.begin())];
    const auto& arg_min = cases[static_cast<std::size_t>(lo_it - values.begin())];
    const auto max_v = static_cast<std::int64_t>(*hi_it), min_v = static_cast<std::int64_t>(*lo_it);
    if (max_v > 6 * p)
      out.counterexample = detail::failure(arg_max, n, "S_f(n) exceeds 6*phi(n)", max_v, 6 * p);
    else if (max_v < 6 * p)
      out.counterexample = detail::failure(arg_max, n, "maximum 6*phi(n) not attained", max_v, 6 * p);
    else if (n >= 7 && min_v < 4 * p)
      out.counterexample = detail::failure(arg_min, n, "S_f(n) below 4*phi(n)", min_v, 4 * p);
    else if (n >= 7 && min_v > 4 * p)
      out.counterexample = detail::failure(arg_min, n, "minimum 4*phi(n) not attained", min_v, 4 * p);
  }
  return out;
}

/// Within P_f[1 : 6*phi(n) + n - 1] the factor at 6*phi(n) occurs only at
/// 4*phi(n) and 6*phi(n).
inline VerificationOutcome verify_lemma_first_occurrence(std::size_t n_lo, std::size_t n_hi,
                                                         const Sampling& sampling = Sampling::exhaustive()) {
  detail::require_range(n_lo, n_hi, 7, "the first-occurrence lemma");
  auto out = detail::start_outcome("lemma1", n_lo, n_hi, sampling);
  detail::for_each_case(out, sampling, false, [](const FoldingInstructions& f, std::size_t n) -> std::optional<Counterexample> {
    const auto p = static_cast<std::size_t>(phi(n));
    const std::string word = pf_prefix_text(f, 6 * p + n - 1);
    const std::string_view target = std::string_view(word).substr(6 * p - 1, n);
    bool at_six = false;
    for (auto pos = word.find(target); pos != std::string::npos; pos = word.find(target, pos + 1)) {
      const std::size_t start = pos + 1;
      if (start == 6 * p) {
        at_six = true;
      } else if (start != 4 * p) {
        return detail::failure(f, n, "factor at 6*phi(n) also occurs at " + std::to_string(start),
                               static_cast<std::int64_t>(start), std::nullopt, std::string(target));
      }
    }
    if (!at_six) return detail::failure(f, n, "factor at 6*phi(n) not found at its own index");
    return std::nullopt;
  });
  return out;
}

/// The last length-n factor to appear is the one at 6*phi(n), and no other
/// factor shares its first start.
inline VerificationOutcome verify_lemma_last_factor(std::size_t n_lo, std::size_t n_hi,
                                                    const Sampling& sampling = Sampling::exhaustive(),
                                                    const Harness& harness = {}) {
  detail::require_range(n_lo, n_hi, 7, "the last-factor lemma");
  auto out = detail::start_outcome("lemma2", n_lo, n_hi, sampling);
  detail::for_each_case(out, sampling, false, [&](const FoldingInstructions& f, std::size_t n) -> std::optional<Counterexample> {
    const auto p = static_cast<std::size_t>(phi(n));
    const FactorScan scan = harness.scan(f, n);
    const std::size_t last = scan.s_value();
    const std::string reference = pf_prefix_text(f, 6 * p + n - 1);
    const std::string target = reference.substr(6 * p - 1, n);
    if (scan.factor_text(last) != target)
      return detail::failure(f, n, "last factor differs from the factor at 6*phi(n)", static_cast<std::int64_t>(last),
                             static_cast<std::int64_t>(6 * p), std::string(scan.factor_text(last)));
    const std::size_t direct = detail::first_occurrence(reference, target);
    if (direct != last)
      return detail::failure(f, n, "scan reports first start " + std::to_string(last) + ", direct search finds " +
                                       std::to_string(direct),
                             static_cast<std::int64_t>(last), static_cast<std::int64_t>(direct), target);
    if (std::count(scan.first_starts.begin(), scan.first_starts.end(), last) != 1)
      return detail::failure(f, n, "maximal first start is shared", static_cast<std::int64_t>(last), std::nullopt, target);
    return std::nullopt;
  });
  return out;
}

/// With phi(n) = 2^k, the factors of length n and 2^k at 6*2^k first appear
/// at the same index.
inline VerificationOutcome verify_lemma_shared_start(std::size_t n_lo, std::size_t n_hi,
                                                     const Sampling& sampling = Sampling::exhaustive()) {
  detail::require_range(n_lo, n_hi, 7, "the shared-start lemma");
  auto out = detail::start_outcome("lemma3", n_lo, n_hi, sampling);
  detail::for_each_case(out, sampling, false, [](const FoldingInstructions& f, std::size_t n) -> std::optional<Counterexample> {
    const auto p = static_cast<std::size_t>(phi(n));
    const std::string word = pf_prefix_text(f, 7 * p - 1);
    const std::string_view base(word);
    const std::size_t short_start = detail::first_occurrence(word, base.substr(6 * p - 1, n));
    const std::size_t full_start = detail::first_occurrence(word, base.substr(6 * p - 1, p));
    if (short_start != full_start)
      return detail::failure(f, n, "length-n and length-phi(n) factors first appear at different indices",
                             static_cast<std::int64_t>(short_start), static_cast<std::int64_t>(full_start),
                             std::string(base.substr(6 * p - 1, n)));
    return std::nullopt;
  });
  return out;
}

/// S_f(n) equals the closed form, and depends on no instruction bit other
/// than f_{k+1} and f_{k+2}.
inline VerificationOutcome verify_theorem(std::size_t n_lo, std::size_t n_hi,
                                          const Sampling& sampling = Sampling::exhaustive(),
                                          const Harness& harness = {}) {
  detail::require_range(n_lo, n_hi, 7, "the closed form");
  if (sampling.mode == EnumerationMode::exhaustive && verification_depth(n_hi) > kMaxExhaustiveDepth)
    throw DomainError("exhaustive mode needs at most " + std::to_string(kMaxExhaustiveDepth) + " free bits at n = " +
                      std::to_string(n_hi));
  auto out = detail::start_outcome("theorem", n_lo, n_hi, sampling);
  for (std::size_t n = n_lo; n <= n_hi && out.passed(); ++n) {
    const std::size_t depth = verification_depth(n);
    out.instruction_depth = std::max(out.instruction_depth, depth);
    const auto cases = instruction_cases(depth, sampling, n);
    struct Row {
      std::size_t s = 0;
      std::size_t predicted = 0;
      FactorScan scan;
    };
    auto rows = parallel_map(cases.size(), [&](std::size_t i) {
      Row r;
      r.scan = harness.scan(cases[i], n);
      r.s = r.scan.s_value();
      r.predicted = harness.predict(cases[i], n);
      return r;
    });
    out.cases += cases.size();

    const std::size_t k = phi_exponent(n);
    std::map<std::pair<Sign, Sign>, std::size_t> by_branch;
    for (std::size_t i = 0; i < cases.size() && out.passed(); ++i) {
      const auto& r = rows[i];
      if (r.s != r.predicted) {
        out.counterexample = detail::failure(cases[i], n, "S_f(n) differs from the closed form",
                                             static_cast<std::int64_t>(r.s), static_cast<std::int64_t>(r.predicted),
                                             std::string(r.scan.factor_text(r.s)));
        break;
      }
      const auto key = std::make_pair(cases[i].at(k + 1), cases[i].at(k + 2));
      const auto [it, fresh] = by_branch.emplace(key, r.s);
      if (!fresh && it->second != r.s)
        out.counterexample = detail::failure(cases[i], n, "S_f(n) changes with bits other than f_{k+1}, f_{k+2}",
                                             static_cast<std::int64_t>(r.s), static_cast<std::int64_t>(it->second));
    }
  }
  return out;
}

/// Eventually periodic instruction tails that are neither constant nor
/// alternating from f_4 on; each must switch branches somewhere in 7..64.
inline const std::vector<std::string>& non_qualifying_tails() {
  static const std::vector<std::string> catalog = {
      "+;++-", "+;+--", "++++;++--", "++++;+++-", "+++++;+-", "++++-;-+", "----;--+", "++++++;-",
  };
  return catalog;
}

/// Fixed tails from f_4 on: alternating gives 4*phi(n), constant gives
/// 6*phi(n), for every head f_0..f_3. The catalog above is the converse
/// spot check.
inline VerificationOutcome verify_corollary_tails(std::size_t n_lo = 7, std::size_t n_hi = 64,
                                                  const Harness& harness = {}) {
  detail::require_range(n_lo, n_hi, 7, "the tail corollary");
  auto out = detail::start_outcome("corollary-tails", n_lo, n_hi, Sampling::exhaustive());
  out.instruction_depth = 4;

  struct Family {
    std::vector<Sign> tail;
    std::size_t factor;
  };
  const std::vector<Family> families = {{{Sign::plus, Sign::minus}, 4},
                                        {{Sign::minus, Sign::plus}, 4},
                                        {{Sign::plus}, 6},
                                        {{Sign::minus}, 6}};
  std::vector<FoldingInstructions> cases;
  std::vector<std::size_t> factors;
  for (const auto& fam : families) {
    for (std::uint64_t head = 0; head < 16; ++head) {
      cases.emplace_back(pattern_from_index(4, head), fam.tail);
      factors.push_back(fam.factor);
    }
  }

  auto results = parallel_map(cases.size(), [&](std::size_t i) -> std::optional<Counterexample> {
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      const std::size_t expected = factors[i] * static_cast<std::size_t>(phi(n));
      const std::size_t s = harness.scan(cases[i], n).s_value();
      if (s != expected)
        return detail::failure(cases[i], n, factors[i] == 4 ? "alternating tail not at 4*phi(n)" : "constant tail not at 6*phi(n)",
                               static_cast<std::int64_t>(s), static_cast<std::int64_t>(expected));
    }
    return std::nullopt;
  });
  out.cases = cases.size() * (n_hi - n_lo + 1);
  for (auto& r : results) {
    if (r) {
      out.counterexample = std::move(r);
      return out;
    }
  }

  const auto& catalog = non_qualifying_tails();
  auto mixed = parallel_map(catalog.size(), [&](std::size_t i) -> std::optional<Counterexample> {
    const auto f = FoldingInstructions::parse(catalog[i]);
    bool saw4 = false, saw6 = false, predicted4 = false, predicted6 = false;
    for (std::size_t n = n_lo; n <= n_hi; ++n) {
      const auto p = static_cast<std::size_t>(phi(n));
      const std::size_t s = harness.scan(f, n).s_value();
      if (s == 4 * p)
        saw4 = true;
      else if (s == 6 * p)
        saw6 = true;
      else
        return detail::failure(f, n, "S_f(n) is neither 4*phi(n) nor 6*phi(n)", static_cast<std::int64_t>(s));
      (harness.predict(f, n) == 4 * p ? predicted4 : predicted6) = true;
    }
    if (predicted4 && predicted6 && !(saw4 && saw6))
      return detail::failure(f, n_hi, std::string("non-qualifying tail stays on the ") + (saw4 ? "4" : "6") +
                                          "*phi(n) branch for every tested n");
    return std::nullopt;
  });
  out.cases += catalog.size() * (n_hi - n_lo + 1);
  for (auto& r : mixed) {
    if (r) {
      out.counterexample = std::move(r);
      break;
    }
  }
  return out;
}

/// S_f(n) is nondecreasing in n for 1 <= n <= n_max, and S_{-f} = S_f.
/// The `depth`-bit patterns repeat periodically, so any n_max is admissible.
inline VerificationOutcome verify_monotonicity_and_symmetry(std::size_t depth, std::size_t n_max,
                                                            const Sampling& sampling = Sampling::exhaustive(),
                                                            const Harness& harness = {}) {
  if (n_max == 0) throw DomainError("n_max must be positive");
  auto out = detail::start_outcome("monotonicity", 1, n_max, sampling);
  out.instruction_depth = depth;
  const auto cases = instruction_cases(depth, sampling, 0, true);
  auto results = parallel_map(cases.size(), [&](std::size_t i) -> std::optional<Counterexample> {
    const auto& f = cases[i];
    const auto g = negate(f);
    std::size_t previous = 0;
    for (std::size_t n = 1; n <= n_max; ++n) {
      const std::size_t s = harness.scan(f, n).s_value();
      const std::size_t s_neg = harness.scan(g, n).s_value();
      if (s < previous)
        return detail::failure(f, n, "S_f(n) < S_f(n-1)", static_cast<std::int64_t>(s),
                               static_cast<std::int64_t>(previous));
      if (s != s_neg)
        return detail::failure(f, n, "S_f(n) != S_{-f}(n)", static_cast<std::int64_t>(s),
                               static_cast<std::int64_t>(s_neg));
      previous = s;
    }
    return std::nullopt;
  });
  out.cases = cases.size();
  for (auto& r : results) {
    if (r) {
      out.counterexample = std::move(r);
      break;
    }
  }
  return out;
}

}  // namespace foldscope
