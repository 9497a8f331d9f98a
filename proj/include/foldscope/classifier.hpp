#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "foldscope/appearance.hpp"
#include "foldscope/error.hpp"
#include "foldscope/fold.hpp"
#include "foldscope/parallel.hpp"
#include "foldscope/verification.hpp"

namespace foldscope {

/// Upper bound on S_f(n) for n <= 6, used to size the enumeration.
inline constexpr std::size_t kSmallFactorBound = 48;

/// S_f(n) as a function of the instruction bits it actually depends on.
struct ClassifierTable {
  std::size_t n = 0;
  /// Free bits f_0..f_{depth-1} enumerated during synthesis.
  std::size_t depth = 0;
  std::vector<std::size_t> relevant_bits;
  std::map<std::vector<Sign>, std::size_t> rows;
  std::set<std::size_t> value_set;

  std::vector<Sign> key_for(const FoldingInstructions& f) const {
    std::vector<Sign> key;
    key.reserve(relevant_bits.size());
    for (std::size_t b : relevant_bits) key.push_back(f.at(b));
    return key;
  }

  std::size_t lookup(const FoldingInstructions& f) const { return rows.at(key_for(f)); }
};

inline std::size_t classifier_depth(std::size_t n) { return required_instruction_count(2 * kSmallFactorBound + n); }

/// Enumerates every instruction prefix of classifier_depth(n) bits, finds the
/// bits whose flip changes S_f(n) somewhere, and tabulates S_f(n) over them.
inline ClassifierTable synthesize_table(std::size_t n) {
  if (n < 1 || n > 6)
    throw DomainError("classifier tables cover 1 <= n <= 6; for n >= 7 use the closed-form prediction");
  ClassifierTable table;
  table.n = n;
  table.depth = classifier_depth(n);
  const auto cases = instruction_cases(table.depth, Sampling::exhaustive());
  const auto values = parallel_map(cases.size(), [&](std::size_t i) { return s_value(cases[i], n); });

  // case index bit j <=> f_j, so flipping f_j is xor with 1 << j
  for (std::size_t j = 0; j < table.depth; ++j) {
    const std::size_t mask = std::size_t{1} << j;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] != values[i ^ mask]) {
        table.relevant_bits.push_back(j);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto [it, fresh] = table.rows.emplace(table.key_for(cases[i]), values[i]);
    if (!fresh && it->second != values[i]) throw Error("relevant-bit detection produced an inconsistent table");
    table.value_set.insert(values[i]);
  }
  return table;
}

/// CSV with one column per relevant bit (values -1/1) and a final S column,
/// rows in lexicographic order of the bit tuple.
inline std::string export_table_csv(const ClassifierTable& t) {
  std::ostringstream os;
  for (std::size_t b : t.relevant_bits) os << 'f' << b << ',';
  os << "S\n";
  for (const auto& [key, value] : t.rows) {
    for (Sign s : key) os << to_int(s) << ',';
    os << value << '\n';
  }
  return os.str();
}

/// Checks the table against s_value on random instruction sets of `length`
/// bits, longer than the synthesis depth.
inline VerificationOutcome crosscheck_table(const ClassifierTable& t, std::size_t samples, std::uint64_t seed,
                                            std::size_t length = 16) {
  VerificationOutcome out;
  out.claim_id = "classifier-crosscheck";
  out.n_lo = out.n_hi = t.n;
  out.instruction_depth = length;
  out.mode = EnumerationMode::sampled;
  out.samples = samples;
  out.seed = seed;
  Sampling sampling = Sampling::sampled(samples, seed);
  auto cases = instruction_cases(length, sampling, 1000 + t.n);
  cases.erase(cases.begin(), cases.begin() + 4);  // keep only the random draws
  auto results = parallel_map(cases.size(), [&](std::size_t i) -> std::optional<Counterexample> {
    const std::size_t s = s_value(cases[i], t.n);
    const std::size_t table_value = t.lookup(cases[i]);
    if (s != table_value)
      return Counterexample{cases[i].str(), t.n, "table disagrees with the factor scan",
                            static_cast<std::int64_t>(s), static_cast<std::int64_t>(table_value), {}};
    return std::nullopt;
  });
  out.cases = cases.size();
  for (auto& r : results)
    if (r) {
      out.counterexample = std::move(r);
      break;
    }
  return out;
}

struct ReportedSmallValues {
  std::size_t n;
  std::set<std::size_t> s_values;
  std::set<std::size_t> a_values;
  /// Instruction indices the value is claimed to depend on (a superset).
  std::set<std::size_t> dependence;
};

/// The value sets and dependence claims for 1 <= n <= 6.
inline const std::vector<ReportedSmallValues>& reported_small_values() {
  static const std::vector<ReportedSmallValues> table = {
      {1, {2, 3}, {2, 3}, {0, 1}},
      {2, {4, 5, 6}, {5, 6, 7}, {0, 1, 2}},
      {3, {14, 16, 22, 24}, {16, 18, 24, 26}, {1, 2, 3, 4}},
      {4, {14, 16, 22, 24}, {17, 19, 25, 27}, {1, 2, 3, 4}},
      {5, {28, 32, 44, 48}, {32, 36, 48, 52}, {1, 2, 3, 4, 5}},
      {6, {31, 32, 47, 48}, {36, 37, 52, 53}, {0, 1, 2, 3, 4, 5}},
  };
  return table;
}

namespace detail {

inline std::string render_set(const std::set<std::size_t>& s) {
  std::string out = "{";
  for (auto it = s.begin(); it != s.end(); ++it) out += (it == s.begin() ? "" : ",") + std::to_string(*it);
  return out + "}";
}

inline std::string render_tuple(const std::vector<Sign>& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) out += (i ? "," : "") + std::to_string(to_int(key[i]));
  return out + ")";
}

// S_f(2) by (f_0, f_1, f_2).
inline std::size_t reported_s2(const std::vector<Sign>& t) {
  using enum Sign;
  static const std::map<std::vector<Sign>, std::size_t> rule = {
      {{minus, minus, plus}, 4}, {{minus, plus, minus}, 4}, {{plus, minus, plus}, 4}, {{plus, plus, minus}, 4},
      {{minus, plus, plus}, 5},  {{plus, minus, minus}, 5}, {{minus, minus, minus}, 6}, {{plus, plus, plus}, 6},
  };
  return rule.at(t);
}

}  // namespace detail

/// Synthesizes the six tables and compares them with the reported value
/// sets for S and A, the dependence claims, and the explicit n = 1 and
/// n = 2 classifications.
inline VerificationOutcome check_reported_sets(const std::vector<ClassifierTable>* prebuilt = nullptr) {
  VerificationOutcome out;
  out.claim_id = "reported-sets";
  out.n_lo = 1;
  out.n_hi = 6;
  out.mode = EnumerationMode::exhaustive;
  std::vector<ClassifierTable> tables;
  if (prebuilt) {
    tables = *prebuilt;
  } else {
    for (std::size_t n = 1; n <= 6; ++n) tables.push_back(synthesize_table(n));
  }
  auto fail = [&](std::size_t n, std::string details) {
    out.counterexample = Counterexample{{}, n, std::move(details), std::nullopt, std::nullopt, {}};
  };
  for (const auto& reported : reported_small_values()) {
    const auto& t = tables.at(reported.n - 1);
    out.instruction_depth = std::max(out.instruction_depth, t.depth);
    out.cases += std::uint64_t{1} << t.depth;
    std::set<std::size_t> a_values;
    for (std::size_t s : t.value_set) a_values.insert(s + t.n - 1);
    if (t.value_set != reported.s_values) {
      fail(t.n, "S value set " + detail::render_set(t.value_set) + " != " + detail::render_set(reported.s_values));
      return out;
    }
    if (a_values != reported.a_values) {
      fail(t.n, "A value set " + detail::render_set(a_values) + " != " + detail::render_set(reported.a_values));
      return out;
    }
    for (std::size_t b : t.relevant_bits) {
      if (!reported.dependence.contains(b)) {
        fail(t.n, "value depends on f_" + std::to_string(b) + ", outside the claimed instruction set");
        return out;
      }
    }
  }

  const auto& t1 = tables[0];
  if (t1.relevant_bits != std::vector<std::size_t>{0, 1}) {
    fail(1, "relevant bits for n = 1 are not {f_0, f_1}");
    return out;
  }
  for (const auto& [key, value] : t1.rows) {
    const std::size_t want = key[0] != key[1] ? 2 : 3;
    if (value != want) {
      fail(1, "row " + detail::render_tuple(key) + " gives " + std::to_string(value));
      return out;
    }
  }
  const auto& t2 = tables[1];
  if (t2.relevant_bits != std::vector<std::size_t>{0, 1, 2}) {
    fail(2, "relevant bits for n = 2 are not {f_0, f_1, f_2}");
    return out;
  }
  for (const auto& [key, value] : t2.rows) {
    if (value != detail::reported_s2(key)) {
      fail(2, "row " + detail::render_tuple(key) + " gives " + std::to_string(value));
      return out;
    }
  }
  return out;
}

/// Two readings of "S_f(7) = 48": for every f, or as the maximum over f.
struct SevenRemarkReadings {
  std::set<std::size_t> observed;
  bool holds_for_every_f = false;
  bool holds_as_maximum = false;
};

inline SevenRemarkReadings check_s7_remark() {
  const auto cases = instruction_cases(verification_depth(7), Sampling::exhaustive());
  const auto values = parallel_map(cases.size(), [&](std::size_t i) { return s_value(cases[i], 7); });
  SevenRemarkReadings r;
  r.observed.insert(values.begin(), values.end());
  r.holds_for_every_f = r.observed == std::set<std::size_t>{48};
  r.holds_as_maximum = !r.observed.empty() && *r.observed.rbegin() == 48;
  return r;
}

}  // namespace foldscope
