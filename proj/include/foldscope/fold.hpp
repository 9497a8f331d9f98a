#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>

#include "foldscope/error.hpp"
#include "foldscope/instructions.hpp"
#include "foldscope/sign.hpp"

namespace foldscope {

/// P_f[k]: with k = 2^s * r and r odd, f_s when r = 1 (mod 4), -f_s when r = 3 (mod 4).
inline Sign pf_value(const FoldingInstructions& f, std::uint64_t k) {
  if (k == 0) throw DomainError("P_f is indexed from 1");
  const int s = std::countr_zero(k);
  const std::uint64_t r = k >> s;
  const Sign fs = f.at(static_cast<std::size_t>(s));
  return (r & 3u) == 1u ? fs : -fs;
}

/// Instructions f_0..f_{c-1} needed for every k <= len, c = floor(log2 len) + 1.
inline std::size_t required_instruction_count(std::uint64_t len) {
  if (len == 0) throw DomainError("length must be positive");
  return static_cast<std::size_t>(std::bit_width(len));
}

/// P_f[1:len].
inline SignWord pf_prefix(const FoldingInstructions& f, std::uint64_t len) {
  if (len == 0) throw DomainError("prefix length must be positive");
  const std::size_t needed = required_instruction_count(len);
  if (!f.available(needed - 1)) throw InstructionExhausted(*f.accessible_count());
  std::vector<Sign> out;
  out.reserve(len);
  for (std::uint64_t k = 1; k <= len; ++k) out.push_back(pf_value(f, k));
  return SignWord(std::move(out));
}

/// Same as pf_prefix, rendered in the `+`/`-` alphabet.
inline std::string pf_prefix_text(const FoldingInstructions& f, std::uint64_t len) {
  return pf_prefix(f, len).str();
}

}  // namespace foldscope
