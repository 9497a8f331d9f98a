#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "foldscope/error.hpp"
#include "foldscope/fold.hpp"
#include "foldscope/instructions.hpp"
#include "foldscope/parallel.hpp"
#include "foldscope/sign.hpp"

namespace foldscope {

using StateId = std::uint32_t;

/// One letter of the parallel alphabet: an instruction sign read alongside a
/// base-2 digit of k. Letters are indexed (-,0) (-,1) (+,0) (+,1).
struct TrackSymbol {
  Sign sign;
  std::uint8_t bit;

  friend bool operator==(const TrackSymbol&, const TrackSymbol&) = default;
};

inline constexpr std::size_t kSymbolCount = 4;

constexpr std::size_t symbol_index(TrackSymbol sym) noexcept {
  return (sym.sign == Sign::plus ? 2u : 0u) + (sym.bit & 1u);
}

constexpr TrackSymbol symbol_at(std::size_t index) noexcept {
  return {index >= 2 ? Sign::plus : Sign::minus, static_cast<std::uint8_t>(index & 1u)};
}

inline std::string symbol_label(std::size_t index) {
  const TrackSymbol sym = symbol_at(index);
  return std::string("(") + to_char(sym.sign) + "," + static_cast<char>('0' + sym.bit) + ")";
}

/// Deterministic automaton with output over the parallel (sign, bit) alphabet.
/// The transition map is total; a state's output may be undefined.
class ParallelDFAO {
 public:
  using Row = std::array<StateId, kSymbolCount>;

  ParallelDFAO(StateId start, std::vector<Row> transitions, std::vector<std::optional<Sign>> outputs,
               std::vector<std::string> labels = {})
      : start_(start),
        transitions_(std::move(transitions)),
        outputs_(std::move(outputs)),
        labels_(std::move(labels)) {
    if (transitions_.empty()) throw DomainError("automaton needs at least one state");
    if (outputs_.size() != transitions_.size())
      throw DomainError("output map size differs from state count");
    if (!labels_.empty() && labels_.size() != transitions_.size())
      throw DomainError("label count differs from state count");
    if (start_ >= transitions_.size()) throw DomainError("start state out of range");
    for (const Row& row : transitions_)
      for (StateId t : row)
        if (t >= transitions_.size()) throw DomainError("transition target out of range");
  }

  std::size_t state_count() const noexcept { return transitions_.size(); }
  StateId start_state() const noexcept { return start_; }

  StateId next(StateId q, std::size_t symbol) const { return transitions_.at(q).at(symbol); }
  StateId next(StateId q, TrackSymbol sym) const { return next(q, symbol_index(sym)); }

  std::optional<Sign> output(StateId q) const { return outputs_.at(q); }

  std::string label(StateId q) const {
    return labels_.empty() ? std::string() : labels_.at(q);
  }
  bool has_labels() const noexcept { return !labels_.empty(); }

  std::span<const Row> transitions() const noexcept { return transitions_; }
  std::span<const std::optional<Sign>> outputs() const noexcept { return outputs_; }

  /// States reachable from the start, in breadth-first order over symbol index.
  std::vector<StateId> reachable_states() const {
    std::vector<StateId> order;
    std::vector<bool> seen(state_count(), false);
    std::queue<StateId> pending;
    pending.push(start_);
    seen[start_] = true;
    while (!pending.empty()) {
      const StateId q = pending.front();
      pending.pop();
      order.push_back(q);
      for (StateId t : transitions_[q]) {
        if (!seen[t]) {
          seen[t] = true;
          pending.push(t);
        }
      }
    }
    return order;
  }

  /// Drops unreachable states and renumbers the rest in breadth-first order.
  ParallelDFAO trimmed() const {
    const auto order = reachable_states();
    std::vector<StateId> rename(state_count(), 0);
    for (std::size_t i = 0; i < order.size(); ++i) rename[order[i]] = static_cast<StateId>(i);
    std::vector<Row> rows;
    std::vector<std::optional<Sign>> outs;
    std::vector<std::string> names;
    for (StateId q : order) {
      Row row{};
      for (std::size_t a = 0; a < kSymbolCount; ++a) row[a] = rename[transitions_[q][a]];
      rows.push_back(row);
      outs.push_back(outputs_[q]);
      if (!labels_.empty()) names.push_back(labels_[q]);
    }
    return ParallelDFAO(0, std::move(rows), std::move(outs), std::move(names));
  }

  /// Copy with a single transition redirected; used for mutation testing.
  ParallelDFAO with_transition(StateId q, std::size_t symbol, StateId target) const {
    ParallelDFAO copy = *this;
    if (q >= state_count() || symbol >= kSymbolCount || target >= state_count())
      throw DomainError("mutation out of range");
    copy.transitions_[q][symbol] = target;
    return copy;
  }

  friend bool operator==(const ParallelDFAO&, const ParallelDFAO&) = default;

 private:
  StateId start_;
  std::vector<Row> transitions_;
  std::vector<std::optional<Sign>> outputs_;
  std::vector<std::string> labels_;
};

/// lsd-first base-2 digits of k, zero padded to width; requires 2^width > k.
inline std::vector<std::uint8_t> lsd2_digits(std::uint64_t k, std::size_t width) {
  if (width == 0) throw DomainError("width must be positive");
  if (static_cast<std::size_t>(std::bit_width(k)) > width)
    throw DomainError("width " + std::to_string(width) + " too small for " + std::to_string(k));
  std::vector<std::uint8_t> digits(width, 0);
  for (std::size_t i = 0; i < width && i < 64; ++i) digits[i] = static_cast<std::uint8_t>((k >> i) & 1u);
  return digits;
}

/// Two equal-length tracks: digits of k (lsd first) and f_0, f_1, ...
struct TrackedInput {
  std::vector<std::uint8_t> digits;
  std::vector<Sign> instructions;

  TrackedInput(std::vector<std::uint8_t> d, std::vector<Sign> instr)
      : digits(std::move(d)), instructions(std::move(instr)) {
    if (digits.size() != instructions.size())
      throw DomainError("digit and instruction tracks differ in length");
    if (digits.empty()) throw DomainError("tracked input is empty");
    for (auto b : digits)
      if (b > 1) throw DomainError("digit track holds a non-binary value");
  }

  static TrackedInput make(const FoldingInstructions& f, std::uint64_t k, std::size_t width) {
    std::vector<Sign> instr;
    instr.reserve(width);
    for (std::size_t s = 0; s < width; ++s) instr.push_back(f.at(s));
    return TrackedInput(lsd2_digits(k, width), std::move(instr));
  }

  std::size_t size() const noexcept { return digits.size(); }
};

inline StateId final_state(const ParallelDFAO& d, const TrackedInput& input) {
  StateId q = d.start_state();
  for (std::size_t i = 0; i < input.size(); ++i) q = d.next(q, TrackSymbol{input.instructions[i], input.digits[i]});
  return q;
}

inline std::optional<Sign> try_run_dfao(const ParallelDFAO& d, const TrackedInput& input) {
  return d.output(final_state(d, input));
}

/// Output of the state reached after reading the whole input. Throws
/// UndefinedOutput when that state carries no value, which happens when the
/// input stops before the digit that settles r mod 4.
inline Sign run_dfao(const ParallelDFAO& d, const TrackedInput& input) {
  const StateId q = final_state(d, input);
  if (auto out = d.output(q)) return *out;
  throw UndefinedOutput("automaton stopped in state " + std::to_string(q) +
                        " without output; supply more digits and instructions");
}

/// The evaluator for P_f[k]. States are generated from the case analysis of
/// k = 2^s * r: skip the low zero digits, remember f_s at the first 1 digit,
/// then the next digit gives r mod 4 and the value is fixed for good.
inline ParallelDFAO build_pf_evaluator() {
  enum class Phase { skipping, latched, decided };
  struct Mode {
    Phase phase;
    Sign sign;
    auto operator<=>(const Mode&) const = default;
  };

  auto step = [](Mode m, TrackSymbol a) -> Mode {
    switch (m.phase) {
      case Phase::skipping:
        return a.bit == 0 ? m : Mode{Phase::latched, a.sign};
      case Phase::latched:
        // r = 1 (mod 4) if the digit after the lowest 1 is 0
        return Mode{Phase::decided, a.bit == 0 ? m.sign : -m.sign};
      case Phase::decided:
        return m;
    }
    return m;
  };
  auto name = [](Mode m) {
    switch (m.phase) {
      case Phase::skipping: return std::string("start");
      case Phase::latched: return std::string("latched") + to_char(m.sign);
      case Phase::decided: return std::string("decided") + to_char(m.sign);
    }
    return std::string();
  };

  std::map<Mode, StateId> ids;
  std::vector<Mode> modes;
  std::vector<ParallelDFAO::Row> rows;
  auto intern = [&](Mode m) {
    auto [it, fresh] = ids.emplace(m, static_cast<StateId>(modes.size()));
    if (fresh) modes.push_back(m);
    return it->second;
  };
  intern(Mode{Phase::skipping, Sign::plus});
  for (std::size_t q = 0; q < modes.size(); ++q) {
    ParallelDFAO::Row row{};
    for (std::size_t a = 0; a < kSymbolCount; ++a) row[a] = intern(step(modes[q], symbol_at(a)));
    rows.push_back(row);
  }

  std::vector<std::optional<Sign>> outputs;
  std::vector<std::string> labels;
  for (const Mode& m : modes) {
    outputs.push_back(m.phase == Phase::decided ? std::optional<Sign>(m.sign) : std::nullopt);
    labels.push_back(name(m));
  }
  return ParallelDFAO(0, std::move(rows), std::move(outputs), std::move(labels));
}

// ---------------------------------------------------------------------------
// Equivalence against the closed formula

struct EquivalenceWitness {
  std::string instructions;
  std::uint64_t k;
  Sign expected;
  std::optional<Sign> actual;  // nullopt: automaton output undefined

  std::string describe() const {
    return "f=" + instructions + " k=" + std::to_string(k) + " formula=" + to_char(expected) +
           " dfao=" + (actual ? std::string(1, to_char(*actual)) : std::string("undefined"));
  }
};

struct EquivalenceReport {
  std::uint64_t k_bound = 0;
  std::size_t streams = 0;
  std::uint64_t comparisons = 0;
  std::optional<std::uint64_t> seed;
  std::optional<EquivalenceWitness> counterexample;

  bool passed() const noexcept { return !counterexample; }
};

namespace detail {

// Flat copy of the automaton for the tight inner loop of equivalence sweeps.
struct FlatDFAO {
  std::vector<StateId> table;
  std::vector<std::int8_t> out;  // 0 = undefined
  StateId start;

  explicit FlatDFAO(const ParallelDFAO& d) : start(d.start_state()) {
    table.reserve(d.state_count() * kSymbolCount);
    for (const auto& row : d.transitions())
      for (StateId t : row) table.push_back(t);
    for (const auto& o : d.outputs()) out.push_back(o ? static_cast<std::int8_t>(to_int(*o)) : 0);
  }
};

inline std::optional<EquivalenceWitness> sweep_stream(const FlatDFAO& flat, const FoldingInstructions& f,
                                                      std::uint64_t k_bound) {
  // width for k is bit_width(k) + 1 so the digit after the top 1 is read
  const std::size_t track_len = static_cast<std::size_t>(std::bit_width(k_bound)) + 1;
  std::vector<std::uint8_t> sign_bits(track_len);
  for (std::size_t s = 0; s < track_len; ++s) sign_bits[s] = f.at(s) == Sign::plus ? 2 : 0;

  for (std::uint64_t k = 1; k <= k_bound; ++k) {
    const std::size_t width = static_cast<std::size_t>(std::bit_width(k)) + 1;
    StateId q = flat.start;
    for (std::size_t i = 0; i < width; ++i) q = flat.table[q * kSymbolCount + (sign_bits[i] | ((k >> i) & 1u))];
    const Sign expected = pf_value(f, k);
    const std::int8_t got = flat.out[q];
    if (got != to_int(expected)) {
      std::optional<Sign> actual;
      if (got != 0) actual = got > 0 ? Sign::plus : Sign::minus;
      return EquivalenceWitness{f.str(), k, expected, actual};
    }
  }
  return std::nullopt;
}

inline FoldingInstructions random_instructions(std::mt19937_64& rng, std::size_t length) {
  std::vector<Sign> bits;
  bits.reserve(length);
  std::uint64_t pool = 0;
  for (std::size_t i = 0; i < length; ++i) {
    if (i % 64 == 0) pool = rng();
    bits.push_back(((pool >> (i % 64)) & 1u) ? Sign::minus : Sign::plus);
  }
  return FoldingInstructions(std::move(bits));
}

}  // namespace detail

/// Compares the automaton with pf_value for every 1 <= k <= k_bound on each
/// stream. The reported counterexample is the first one in (stream, k) order.
inline EquivalenceReport equivalence_check_streams(const ParallelDFAO& d, std::uint64_t k_bound,
                                                   std::span<const FoldingInstructions> streams) {
  if (k_bound == 0) throw DomainError("k_bound must be positive");
  const detail::FlatDFAO flat(d);
  auto results = parallel_map(streams.size(), [&](std::size_t i) {
    return detail::sweep_stream(flat, streams[i], k_bound);
  });
  EquivalenceReport report;
  report.k_bound = k_bound;
  report.streams = streams.size();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i]) {
      report.counterexample = results[i];
      report.comparisons += results[i]->k;
      break;
    }
    report.comparisons += k_bound;
  }
  return report;
}

/// Streams checked regardless of sampling: constant and alternating, both signs.
inline std::vector<FoldingInstructions> fixed_streams() {
  return {FoldingInstructions::periodic({Sign::plus}), FoldingInstructions::periodic({Sign::minus}),
          FoldingInstructions::periodic({Sign::plus, Sign::minus}),
          FoldingInstructions::periodic({Sign::minus, Sign::plus})};
}

inline EquivalenceReport equivalence_check(const ParallelDFAO& d, std::uint64_t k_bound,
                                           std::size_t instr_samples, std::uint64_t seed) {
  if (k_bound == 0) throw DomainError("k_bound must be positive");
  std::vector<FoldingInstructions> streams = fixed_streams();
  std::mt19937_64 rng(seed);
  const std::size_t length = static_cast<std::size_t>(std::bit_width(k_bound)) + 1;
  for (std::size_t i = 0; i < instr_samples; ++i) streams.push_back(detail::random_instructions(rng, length));
  EquivalenceReport report = equivalence_check_streams(d, k_bound, streams);
  report.seed = seed;
  return report;
}

// ---------------------------------------------------------------------------
// Text exports

namespace detail {
inline std::string output_char(const std::optional<Sign>& o) {
  return o ? std::string(1, to_char(*o)) : std::string("?");
}
}  // namespace detail

/// Graphviz rendering. One node per state labelled `id name / output`, one
/// edge per (state, symbol) in index order; the start state is drawn bold.
inline std::string export_dot(const ParallelDFAO& d) {
  std::ostringstream os;
  os << "digraph dfao {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  for (StateId q = 0; q < d.state_count(); ++q) {
    os << "  s" << q << " [label=\"" << q;
    if (d.has_labels() && !d.label(q).empty()) os << " " << d.label(q);
    os << " / " << detail::output_char(d.output(q)) << "\"";
    if (q == d.start_state()) os << ", style=bold";
    os << "];\n";
  }
  for (StateId q = 0; q < d.state_count(); ++q)
    for (std::size_t a = 0; a < kSymbolCount; ++a)
      os << "  s" << q << " -> s" << d.next(q, a) << " [label=\"" << symbol_label(a) << "\"];\n";
  os << "}\n";
  return os.str();
}

inline constexpr std::string_view kTableHeader = "# dfao-v1";

/// Plain-text table:
///   # dfao-v1
///   alphabet (-,0) (-,1) (+,0) (+,1)
///   start 0
///   0 ? : (-,0)->0 (-,1)->2 (+,0)->0 (+,1)->1 # start
/// Output `?` marks an undefined value; text after `#` is the state label.
inline std::string export_table(const ParallelDFAO& d) {
  std::ostringstream os;
  os << kTableHeader << "\n";
  os << "alphabet";
  for (std::size_t a = 0; a < kSymbolCount; ++a) os << " " << symbol_label(a);
  os << "\n";
  os << "start " << d.start_state() << "\n";
  for (StateId q = 0; q < d.state_count(); ++q) {
    os << q << " " << detail::output_char(d.output(q)) << " :";
    for (std::size_t a = 0; a < kSymbolCount; ++a) os << " " << symbol_label(a) << "->" << d.next(q, a);
    if (d.has_labels() && !d.label(q).empty()) os << " # " << d.label(q);
    os << "\n";
  }
  return os.str();
}

inline ParallelDFAO parse_table(std::string_view text) {
  std::vector<std::string> lines;
  {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto nl = text.find('\n', pos);
      if (nl == std::string_view::npos) {
        if (pos < text.size()) lines.emplace_back(text.substr(pos));
        break;
      }
      lines.emplace_back(text.substr(pos, nl - pos));
      pos = nl + 1;
    }
  }
  if (lines.empty() || lines[0] != kTableHeader) throw ParseError(1, "missing '# dfao-v1' header");

  auto parse_id = [](const std::string& tok, std::size_t line) -> StateId {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(line, "expected a state id, got '" + tok + "'");
    try {
      return static_cast<StateId>(std::stoul(tok));
    } catch (const std::exception&) {
      throw ParseError(line, "state id '" + tok + "' out of range");
    }
  };

  if (lines.size() < 2) throw ParseError(2, "missing alphabet line");
  {
    std::istringstream is(lines[1]);
    std::string word;
    is >> word;
    if (word != "alphabet") throw ParseError(2, "expected 'alphabet'");
    for (std::size_t a = 0; a < kSymbolCount; ++a) {
      if (!(is >> word) || word != symbol_label(a))
        throw ParseError(2, "alphabet must be (-,0) (-,1) (+,0) (+,1)");
    }
    if (is >> word) throw ParseError(2, "trailing text after alphabet");
  }

  if (lines.size() < 3) throw ParseError(3, "missing start line");
  StateId start = 0;
  {
    std::istringstream is(lines[2]);
    std::string word, id, extra;
    if (!(is >> word >> id) || word != "start") throw ParseError(3, "expected 'start <id>'");
    if (is >> extra) throw ParseError(3, "trailing text after start state");
    start = parse_id(id, 3);
  }

  std::vector<ParallelDFAO::Row> rows;
  std::vector<std::optional<Sign>> outputs;
  std::vector<std::string> labels;
  std::vector<std::size_t> row_line;
  bool any_label = false;
  for (std::size_t li = 3; li < lines.size(); ++li) {
    const std::size_t line_no = li + 1;
    std::string body = lines[li];
    std::string label;
    if (const auto hash = body.find('#'); hash != std::string::npos) {
      label = body.substr(hash + 1);
      body.resize(hash);
      const auto b = label.find_first_not_of(' ');
      label = b == std::string::npos ? std::string() : label.substr(b);
      while (!label.empty() && label.back() == ' ') label.pop_back();
      any_label = any_label || !label.empty();
    }
    std::istringstream is(body);
    std::string id_tok, out_tok, colon;
    if (!(is >> id_tok)) {
      if (label.empty()) continue;  // blank line
      throw ParseError(line_no, "label without a state");
    }
    if (parse_id(id_tok, line_no) != rows.size())
      throw ParseError(line_no, "states must be listed in order; expected id " + std::to_string(rows.size()));
    if (!(is >> out_tok >> colon) || colon != ":") throw ParseError(line_no, "expected '<id> <output> :'");
    if (out_tok == "+")
      outputs.push_back(Sign::plus);
    else if (out_tok == "-")
      outputs.push_back(Sign::minus);
    else if (out_tok == "?")
      outputs.push_back(std::nullopt);
    else
      throw ParseError(line_no, "output must be '+', '-' or '?'");

    ParallelDFAO::Row row{};
    std::array<bool, kSymbolCount> filled{};
    std::string tr;
    while (is >> tr) {
      const auto arrow = tr.find("->");
      if (arrow == std::string::npos) throw ParseError(line_no, "malformed transition '" + tr + "'");
      const std::string sym = tr.substr(0, arrow);
      std::size_t a = 0;
      while (a < kSymbolCount && symbol_label(a) != sym) ++a;
      if (a == kSymbolCount) throw ParseError(line_no, "unknown symbol '" + sym + "'");
      if (filled[a]) throw ParseError(line_no, "duplicate transition on " + sym);
      filled[a] = true;
      row[a] = parse_id(tr.substr(arrow + 2), line_no);
    }
    for (std::size_t a = 0; a < kSymbolCount; ++a)
      if (!filled[a]) throw ParseError(line_no, "missing transition on " + symbol_label(a));
    rows.push_back(row);
    labels.push_back(label);
    row_line.push_back(line_no);
  }
  if (rows.empty()) throw ParseError(lines.size() + 1, "table has no states");
  if (start >= rows.size()) throw ParseError(3, "start state out of range");
  for (std::size_t q = 0; q < rows.size(); ++q)
    for (StateId t : rows[q])
      if (t >= rows.size()) throw ParseError(row_line[q], "transition target " + std::to_string(t) + " out of range");
  if (!any_label) labels.clear();
  return ParallelDFAO(start, std::move(rows), std::move(outputs), std::move(labels));
}

/// Isomorphism up to state renumbering, restricted to the reachable parts.
/// Labels are ignored.
inline bool isomorphic(const ParallelDFAO& a, const ParallelDFAO& b) {
  const std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> to_b(a.state_count(), unset), to_a(b.state_count(), unset);
  std::queue<std::pair<StateId, StateId>> pending;
  pending.emplace(a.start_state(), b.start_state());
  to_b[a.start_state()] = b.start_state();
  to_a[b.start_state()] = a.start_state();
  while (!pending.empty()) {
    auto [p, q] = pending.front();
    pending.pop();
    if (a.output(p) != b.output(q)) return false;
    for (std::size_t s = 0; s < kSymbolCount; ++s) {
      const StateId pn = a.next(p, s), qn = b.next(q, s);
      if (to_b[pn] == unset && to_a[qn] == unset) {
        to_b[pn] = qn;
        to_a[qn] = pn;
        pending.emplace(pn, qn);
      } else if (to_b[pn] != qn || to_a[qn] != pn) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace foldscope
