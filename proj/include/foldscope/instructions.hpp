#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "foldscope/error.hpp"
#include "foldscope/sign.hpp"

namespace foldscope {

/// Folding instructions f = (f_0, f_1, ...): an explicit prefix optionally
/// followed by a period repeated forever. Without a period, asking for f_s
/// past the prefix throws InstructionExhausted.
class FoldingInstructions {
 public:
  explicit FoldingInstructions(std::vector<Sign> prefix,
                               std::optional<std::vector<Sign>> tail_period = std::nullopt)
      : prefix_(std::move(prefix)), tail_(std::move(tail_period)) {
    if (tail_ && tail_->empty()) throw DomainError("tail period must be non-empty");
    if (prefix_.empty() && !tail_) throw DomainError("instruction set has no instructions");
  }

  /// Purely periodic instructions: f_s = period[s mod |period|].
  static FoldingInstructions periodic(std::vector<Sign> period) {
    return FoldingInstructions({}, std::move(period));
  }

  static FoldingInstructions regular() { return periodic({Sign::plus}); }

  /// Parses `+`/`-` text with an optional `;` before the period, e.g. `++-;+-`.
  static FoldingInstructions parse(std::string_view text);

  Sign at(std::size_t s) const {
    if (s < prefix_.size()) return prefix_[s];
    if (!tail_) throw InstructionExhausted(s);
    return (*tail_)[(s - prefix_.size()) % tail_->size()];
  }
  Sign operator[](std::size_t s) const { return at(s); }

  bool available(std::size_t s) const noexcept { return tail_ || s < prefix_.size(); }

  /// Number of accessible instructions; nullopt when a period makes it unbounded.
  std::optional<std::size_t> accessible_count() const noexcept {
    if (tail_) return std::nullopt;
    return prefix_.size();
  }

  std::span<const Sign> prefix() const noexcept { return prefix_; }
  const std::optional<std::vector<Sign>>& tail_period() const noexcept { return tail_; }
  bool has_tail() const noexcept { return tail_.has_value(); }

  std::string str() const {
    std::string out = render_signs(prefix_);
    if (tail_) out += ";" + render_signs(*tail_);
    return out;
  }

  friend bool operator==(const FoldingInstructions&, const FoldingInstructions&) = default;

 private:
  std::vector<Sign> prefix_;
  std::optional<std::vector<Sign>> tail_;
};

inline FoldingInstructions FoldingInstructions::parse(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) {
    if (text.empty()) throw ParseError(0, "empty instruction string");
    return FoldingInstructions(parse_signs(text));
  }
  if (text.find(';', semi + 1) != std::string_view::npos)
    throw ParseError(0, "more than one ';' in instruction string");
  const auto period = text.substr(semi + 1);
  if (period.empty()) throw ParseError(0, "empty period after ';'");
  return FoldingInstructions(parse_signs(text.substr(0, semi)), parse_signs(period));
}

inline FoldingInstructions make_instructions(std::span<const int> prefix,
                                             std::optional<std::span<const int>> tail_period = std::nullopt) {
  std::optional<std::vector<Sign>> tail;
  if (tail_period) tail = signs_from_ints(*tail_period);
  return FoldingInstructions(signs_from_ints(prefix), std::move(tail));
}

inline FoldingInstructions negate(const FoldingInstructions& f) {
  auto flip = [](std::span<const Sign> in) {
    std::vector<Sign> out;
    out.reserve(in.size());
    for (Sign s : in) out.push_back(-s);
    return out;
  };
  std::optional<std::vector<Sign>> tail;
  if (f.tail_period()) tail = flip(*f.tail_period());
  return FoldingInstructions(flip(f.prefix()), std::move(tail));
}

}  // namespace foldscope
