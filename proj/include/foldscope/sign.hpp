#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foldscope/error.hpp"

namespace foldscope {

/// A hill (+1) or a valley (-1). Ordered with minus < plus.
enum class Sign : std::int8_t { minus = -1, plus = 1 };

constexpr Sign operator-(Sign s) noexcept {
  return s == Sign::plus ? Sign::minus : Sign::plus;
}

constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }

constexpr char to_char(Sign s) noexcept { return s == Sign::plus ? '+' : '-'; }

inline Sign sign_from_int(int v) {
  if (v == 1) return Sign::plus;
  if (v == -1) return Sign::minus;
  throw DomainError("sign value " + std::to_string(v) + " is not -1 or +1");
}

inline Sign sign_from_char(char c) {
  if (c == '+') return Sign::plus;
  if (c == '-') return Sign::minus;
  throw ParseError(0, std::string("unexpected character '") + c + "', expected '+' or '-'");
}

inline std::vector<Sign> signs_from_ints(std::span<const int> values) {
  std::vector<Sign> out;
  out.reserve(values.size());
  for (int v : values) out.push_back(sign_from_int(v));
  return out;
}

inline std::vector<Sign> parse_signs(std::string_view text) {
  std::vector<Sign> out;
  out.reserve(text.size());
  for (char c : text) out.push_back(sign_from_char(c));
  return out;
}

inline std::string render_signs(std::span<const Sign> values) {
  std::string out;
  out.reserve(values.size());
  for (Sign s : values) out.push_back(to_char(s));
  return out;
}

/// OEIS-style rendering: -1 becomes 0, +1 becomes 1.
inline std::string render_binary(std::span<const Sign> values) {
  std::string out;
  out.reserve(values.size());
  for (Sign s : values) out.push_back(s == Sign::plus ? '1' : '0');
  return out;
}

/// Finite word over {-1,+1} with 1-based positions: w[1] is the first letter.
class SignWord {
 public:
  SignWord() = default;
  explicit SignWord(std::vector<Sign> values) : values_(std::move(values)) {}

  static SignWord parse(std::string_view text) { return SignWord(parse_signs(text)); }

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  Sign at(std::size_t i) const {
    if (i < 1 || i > values_.size())
      throw DomainError("position " + std::to_string(i) + " outside w[1:" +
                        std::to_string(values_.size()) + "]");
    return values_[i - 1];
  }
  Sign operator[](std::size_t i) const { return at(i); }

  /// w[i:j], both ends inclusive.
  SignWord slice(std::size_t i, std::size_t j) const {
    if (i < 1 || i > j || j > values_.size())
      throw DomainError("slice [" + std::to_string(i) + ":" + std::to_string(j) +
                        "] undefined for a word of length " + std::to_string(values_.size()));
    return SignWord(std::vector<Sign>(values_.begin() + static_cast<std::ptrdiff_t>(i - 1),
                                      values_.begin() + static_cast<std::ptrdiff_t>(j)));
  }

  std::span<const Sign> values() const noexcept { return values_; }
  std::string str() const { return render_signs(values_); }

  friend bool operator==(const SignWord&, const SignWord&) = default;
  friend auto operator<=>(const SignWord&, const SignWord&) = default;

 private:
  std::vector<Sign> values_;
};

/// A factor together with the index of its earliest occurrence.
struct Factor {
  SignWord word;
  std::size_t first_start;

  Factor(SignWord w, std::size_t start) : word(std::move(w)), first_start(start) {
    if (word.empty()) throw DomainError("factor must be non-empty");
    if (first_start < 1) throw DomainError("factor start must be >= 1");
  }
};

}  // namespace foldscope
