#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "foldscope/error.hpp"
#include "foldscope/fold.hpp"
#include "foldscope/instructions.hpp"
#include "foldscope/sign.hpp"

namespace foldscope {

/// Least power of two that is >= n.
inline std::uint64_t phi(std::uint64_t n) {
  if (n == 0) throw DomainError("phi is defined for n >= 1");
  return std::bit_ceil(n);
}

/// k with phi(n) = 2^k.
inline std::size_t phi_exponent(std::uint64_t n) {
  return static_cast<std::size_t>(std::countr_zero(phi(n)));
}

/// First occurrences of every length-n factor of P_f.
///
/// Start indices 1..6*phi(n) are scanned first. The horizon then doubles
/// until a whole window [H+1, 2H] yields no new factor, so the result does
/// not depend on the upper bound being right.
struct FactorScan {
  std::size_t n = 0;
  /// Last start index examined (2H for the final horizon H).
  std::size_t horizon = 0;
  /// P_f[1 : horizon + n - 1] in the `+`/`-` alphabet.
  std::string word;
  /// First start of each distinct factor, increasing.
  std::vector<std::size_t> first_starts;

  std::size_t s_value() const { return first_starts.back(); }
  std::size_t factor_count() const noexcept { return first_starts.size(); }

  std::string_view factor_text(std::size_t start) const {
    return std::string_view(word).substr(start - 1, n);
  }
  SignWord factor_at(std::size_t start) const { return SignWord::parse(factor_text(start)); }
};

namespace detail {

inline void extend_prefix(std::string& word, const FoldingInstructions& f, std::size_t len) {
  word.reserve(len);
  for (std::size_t k = word.size() + 1; k <= len; ++k) word.push_back(to_char(pf_value(f, k)));
}

// Factors are identified by start index into a shared buffer; the functors
// hold the buffer by pointer so growth of the string is harmless.
struct WindowHash {
  const std::string* buf;
  std::size_t n;
  std::size_t operator()(std::size_t start) const noexcept {
    return std::hash<std::string_view>{}(std::string_view(buf->data() + start - 1, n));
  }
};
struct WindowEq {
  const std::string* buf;
  std::size_t n;
  bool operator()(std::size_t a, std::size_t b) const noexcept {
    return std::memcmp(buf->data() + a - 1, buf->data() + b - 1, n) == 0;
  }
};

}  // namespace detail

inline FactorScan scan_factors(const FoldingInstructions& f, std::size_t n) {
  if (n == 0) throw DomainError("factor length must be positive");
  FactorScan scan;
  scan.n = n;
  std::unordered_set<std::size_t, detail::WindowHash, detail::WindowEq> seen(
      64, detail::WindowHash{&scan.word, n}, detail::WindowEq{&scan.word, n});

  auto scan_range = [&](std::size_t from, std::size_t to) {
    bool fresh = false;
    for (std::size_t i = from; i <= to; ++i) {
      if (seen.insert(i).second) {
        scan.first_starts.push_back(i);
        fresh = true;
      }
    }
    return fresh;
  };

  std::size_t horizon = 6 * static_cast<std::size_t>(phi(n));
  detail::extend_prefix(scan.word, f, horizon + n - 1);
  scan_range(1, horizon);
  for (;;) {
    detail::extend_prefix(scan.word, f, 2 * horizon + n - 1);
    if (!scan_range(horizon + 1, 2 * horizon)) break;
    horizon *= 2;
  }
  scan.horizon = 2 * horizon;
  return scan;
}

/// Distinct length-n factors mapped to their first start, in lexicographic
/// order with - < +.
inline std::map<SignWord, std::size_t> distinct_factors(const FoldingInstructions& f, std::size_t n) {
  const FactorScan scan = scan_factors(f, n);
  std::map<SignWord, std::size_t> out;
  for (std::size_t start : scan.first_starts) out.emplace(scan.factor_at(start), start);
  return out;
}

/// Least k such that every length-n factor starts within P_f[1:k].
inline std::size_t s_value(const FoldingInstructions& f, std::size_t n) { return scan_factors(f, n).s_value(); }

/// Least k such that every length-n factor lies within P_f[1:k].
inline std::size_t a_value(const FoldingInstructions& f, std::size_t n) { return s_value(f, n) + n - 1; }

struct AppearanceReport {
  std::size_t n;
  std::uint64_t phi_n;
  std::size_t s_value;
  std::size_t a_value;
  Factor last_factor;
  std::size_t factor_count;
  std::size_t horizon_used;
};

inline AppearanceReport make_report(const FactorScan& scan) {
  const std::size_t n = scan.n;
  const std::size_t s = scan.s_value();
  if (n >= 7) {
    std::size_t ties = 0;
    for (std::size_t start : scan.first_starts) ties += start == s;
    if (ties != 1) throw AmbiguityError("several factors share the last first start " + std::to_string(s));
  }
  return AppearanceReport{n,           phi(n),
                          s,           s + n - 1,
                          Factor(scan.factor_at(s), s),
                          scan.factor_count(), scan.horizon};
}

inline AppearanceReport appearance_report(const FoldingInstructions& f, std::size_t n) {
  return make_report(scan_factors(f, n));
}

/// Closed form for n >= 7 with phi(n) = 2^k: 4*phi(n) when f_{k+1} != f_{k+2},
/// 6*phi(n) otherwise.
inline std::size_t predicted_s(const FoldingInstructions& f, std::size_t n) {
  if (n < 7) throw DomainError("closed form holds for n >= 7 only, got n = " + std::to_string(n));
  const std::size_t k = phi_exponent(n);
  const auto p = static_cast<std::size_t>(phi(n));
  return f.at(k + 1) != f.at(k + 2) ? 4 * p : 6 * p;
}

inline std::size_t predicted_a(const FoldingInstructions& f, std::size_t n) { return predicted_s(f, n) + n - 1; }

}  // namespace foldscope
