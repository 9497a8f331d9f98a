#pragma once

#include <CLI11.hpp>

#include <bit>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "foldscope/appearance.hpp"
#include "foldscope/classifier.hpp"
#include "foldscope/dfao.hpp"
#include "foldscope/fold.hpp"
#include "foldscope/instructions.hpp"
#include "foldscope/json_io.hpp"
#include "foldscope/verification.hpp"

namespace foldscope::cli {

enum ExitCode : int { kSuccess = 0, kVerificationFailed = 1, kUsage = 2 };

/// Factor lengths up to this bound are enumerated exhaustively in `auto` mode.
inline constexpr std::size_t kExhaustiveNMax = 64;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::string subcommand;
  std::string instructions;
  std::string format = "text";
  std::optional<std::string> out_path;

  std::uint64_t length = 0;
  std::uint64_t k = 0;
  std::optional<std::size_t> width;
  bool oeis = false;
  bool predict = false;

  std::string claim;
  std::optional<std::size_t> n_lo;
  std::optional<std::size_t> n_hi;
  std::string mode = "auto";
  std::size_t samples = 200;
  std::uint64_t seed = 1;
  std::optional<std::size_t> depth;
  std::uint64_t k_bound = 4096;

  std::string target;
};

namespace detail {

inline void emit(const CliConfig& cfg, const std::string& text, std::ostream& out) {
  if (!cfg.out_path) {
    out << text;
    return;
  }
  std::ofstream file(*cfg.out_path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file " + *cfg.out_path);
  file << text;
}

inline FoldingInstructions instructions_of(const CliConfig& cfg) {
  try {
    return FoldingInstructions::parse(cfg.instructions);
  } catch (const Error& e) {
    throw UsageError("bad instruction string '" + cfg.instructions + "': " + e.what());
  }
}

inline int cmd_seq(const CliConfig& cfg, std::ostream& out) {
  const auto f = instructions_of(cfg);
  const SignWord word = pf_prefix(f, cfg.length);
  std::string text;
  if (cfg.format == "json") {
    nlohmann::json values = nlohmann::json::array();
    for (Sign s : word.values()) values.push_back(cfg.oeis ? (s == Sign::plus ? 1 : 0) : to_int(s));
    text = nlohmann::json{{"instructions", f.str()}, {"n", cfg.length}, {"oeis", cfg.oeis}, {"values", values}}.dump() + "\n";
  } else {
    text = (cfg.oeis ? render_binary(word.values()) : word.str()) + "\n";
  }
  emit(cfg, text, out);
  return kSuccess;
}

inline int cmd_eval(const CliConfig& cfg, std::ostream& out) {
  const auto f = instructions_of(cfg);
  if (cfg.k == 0) throw UsageError("k must be >= 1");
  const std::size_t width = cfg.width.value_or(static_cast<std::size_t>(std::bit_width(cfg.k)) + 1);
  const Sign formula = pf_value(f, cfg.k);
  const Sign automaton = run_dfao(build_pf_evaluator(), TrackedInput::make(f, cfg.k, width));
  std::string text;
  if (cfg.format == "json") {
    text = nlohmann::json{{"instructions", f.str()}, {"k", cfg.k},       {"width", width},
                          {"formula", to_int(formula)}, {"dfao", to_int(automaton)}, {"agree", formula == automaton}}
               .dump() +
           "\n";
  } else {
    text = "P_f[" + std::to_string(cfg.k) + "] = " + std::to_string(to_int(formula)) + " (formula), " +
           std::to_string(to_int(automaton)) + " (dfao, width " + std::to_string(width) + ")\n";
  }
  emit(cfg, text, out);
  return formula == automaton ? kSuccess : kVerificationFailed;
}

inline int cmd_appearance(const CliConfig& cfg, std::ostream& out) {
  const auto f = instructions_of(cfg);
  if (cfg.length == 0) throw UsageError("n must be >= 1");
  const std::size_t n = static_cast<std::size_t>(cfg.length);
  const AppearanceReport report = appearance_report(f, n);
  std::optional<std::size_t> predicted;
  if (cfg.predict && n >= 7) predicted = predicted_s(f, n);
  const bool agree = !predicted || *predicted == report.s_value;

  std::string text;
  if (cfg.format == "json") {
    auto j = to_json(report);
    if (cfg.predict) {
      j["predicted"] = predicted ? nlohmann::json(*predicted) : nlohmann::json(nullptr);
      j["agree"] = predicted ? nlohmann::json(agree) : nlohmann::json(nullptr);
    }
    text = j.dump() + "\n";
  } else {
    std::ostringstream os;
    os << "n=" << report.n << " phi=" << report.phi_n << " s=" << report.s_value << " a=" << report.a_value
       << " last_factor=" << report.last_factor.word.str() << " first_start=" << report.last_factor.first_start
       << " factor_count=" << report.factor_count << " horizon=" << report.horizon_used;
    if (cfg.predict) {
      if (predicted)
        os << " predicted=" << *predicted << (agree ? " agree" : " disagree");
      else
        os << " predicted=n/a (closed form needs n >= 7)";
    }
    os << "\n";
    text = os.str();
  }
  emit(cfg, text, out);
  return agree ? kSuccess : kVerificationFailed;
}

inline int cmd_predict(const CliConfig& cfg, std::ostream& out) {
  const auto f = instructions_of(cfg);
  const std::size_t n = static_cast<std::size_t>(cfg.length);
  if (n < 7) throw UsageError("the closed form covers n >= 7; use `classify` for smaller n");
  const std::size_t s = predicted_s(f, n);
  std::string text;
  if (cfg.format == "json")
    text = nlohmann::json{{"n", n}, {"phi", phi(n)}, {"s", s}, {"a", s + n - 1}}.dump() + "\n";
  else
    text = "n=" + std::to_string(n) + " phi=" + std::to_string(phi(n)) + " s=" + std::to_string(s) +
           " a=" + std::to_string(s + n - 1) + "\n";
  emit(cfg, text, out);
  return kSuccess;
}

inline std::vector<std::pair<std::size_t, std::size_t>> split_range(std::size_t lo, std::size_t hi) {
  if (lo > kExhaustiveNMax || hi <= kExhaustiveNMax) return {{lo, hi}};
  return {{lo, kExhaustiveNMax}, {kExhaustiveNMax + 1, hi}};
}

inline Sampling sampling_for(const CliConfig& cfg, std::size_t lo) {
  if (cfg.mode == "exhaustive") return Sampling::exhaustive();
  if (cfg.mode == "sampled") return Sampling::sampled(cfg.samples, cfg.seed);
  return lo > kExhaustiveNMax ? Sampling::sampled(cfg.samples, cfg.seed) : Sampling::exhaustive();
}

template <class Run>
void run_ranged(const CliConfig& cfg, std::size_t lo, std::size_t hi, std::vector<VerificationOutcome>& outcomes,
                Run&& run) {
  const auto pieces = cfg.mode == "auto" ? split_range(lo, hi) : std::vector<std::pair<std::size_t, std::size_t>>{{lo, hi}};
  for (auto [a, b] : pieces) outcomes.push_back(run(a, b, sampling_for(cfg, a)));
}

inline int cmd_verify(const CliConfig& cfg, std::ostream& out) {
  static const std::vector<std::string> claims = {"formula-dfao", "bounds", "lemma1", "lemma2", "lemma3",
                                                  "theorem", "corollary-tails", "monotonicity", "all"};
  if (std::find(claims.begin(), claims.end(), cfg.claim) == claims.end())
    throw UsageError("unknown claim '" + cfg.claim + "'");
  if (cfg.mode != "auto" && cfg.mode != "exhaustive" && cfg.mode != "sampled")
    throw UsageError("mode must be auto, exhaustive or sampled");

  const bool all = cfg.claim == "all";
  const std::size_t hi = cfg.n_hi.value_or(kExhaustiveNMax);
  auto low_for = [&](std::size_t minimum, const char* what) {
    if (!cfg.n_lo) return minimum;
    if (*cfg.n_lo < minimum) {
      if (all) return minimum;
      throw UsageError(std::string(what) + " is stated for n >= " + std::to_string(minimum));
    }
    return *cfg.n_lo;
  };
  auto wants = [&](const char* c) { return all || cfg.claim == c; };

  std::vector<VerificationOutcome> outcomes;
  if (wants("formula-dfao")) {
    const std::size_t depth = cfg.depth.value_or(required_instruction_count(cfg.k_bound));
    if (depth < required_instruction_count(cfg.k_bound))
      throw UsageError("--depth must be at least " + std::to_string(required_instruction_count(cfg.k_bound)));
    const Sampling s = cfg.mode == "sampled" ? Sampling::sampled(cfg.samples, cfg.seed) : Sampling::exhaustive();
    outcomes.push_back(verify_formula_vs_dfao(cfg.k_bound, depth, s));
  }
  if (wants("bounds")) {
    const std::size_t lo = low_for(3, "the bound check");
    if (hi < lo) throw UsageError("--n-hi below --n-lo");
    run_ranged(cfg, lo, hi, outcomes, [](auto a, auto b, const Sampling& s) { return verify_bounds(a, b, s); });
  }
  const std::size_t lemma_lo = (wants("lemma1") || wants("lemma2") || wants("lemma3") || wants("theorem") ||
                                wants("corollary-tails"))
                                   ? low_for(7, "this claim")
                                   : 7;
  if ((wants("lemma1") || wants("theorem")) && hi < lemma_lo) throw UsageError("--n-hi below --n-lo");
  if (wants("lemma1"))
    run_ranged(cfg, lemma_lo, hi, outcomes,
               [](auto a, auto b, const Sampling& s) { return verify_lemma_first_occurrence(a, b, s); });
  if (wants("lemma2"))
    run_ranged(cfg, lemma_lo, hi, outcomes,
               [](auto a, auto b, const Sampling& s) { return verify_lemma_last_factor(a, b, s); });
  if (wants("lemma3"))
    run_ranged(cfg, lemma_lo, hi, outcomes,
               [](auto a, auto b, const Sampling& s) { return verify_lemma_shared_start(a, b, s); });
  if (wants("theorem"))
    run_ranged(cfg, lemma_lo, hi, outcomes, [](auto a, auto b, const Sampling& s) { return verify_theorem(a, b, s); });
  if (wants("corollary-tails")) {
    if (hi < lemma_lo) throw UsageError("--n-hi below --n-lo");
    outcomes.push_back(verify_corollary_tails(lemma_lo, hi));
  }
  if (wants("monotonicity")) {
    const Sampling s = cfg.mode == "sampled" ? Sampling::sampled(cfg.samples, cfg.seed) : Sampling::exhaustive();
    outcomes.push_back(verify_monotonicity_and_symmetry(cfg.depth.value_or(8), hi, s));
  }

  std::string text;
  bool ok = true;
  for (const auto& o : outcomes) {
    ok = ok && o.passed();
    text += to_json(o).dump() + "\n";
  }
  emit(cfg, text, out);
  return ok ? kSuccess : kVerificationFailed;
}

inline ClassifierTable table_for(std::uint64_t n) {
  if (n < 1 || n > 6) throw UsageError("classify covers n in 1..6; for n >= 7 use `appearance --predict`");
  return synthesize_table(static_cast<std::size_t>(n));
}

inline int cmd_classify(const CliConfig& cfg, std::ostream& out) {
  const auto t = table_for(cfg.length);
  std::string text;
  if (cfg.format == "json") {
    text = to_json(t).dump() + "\n";
  } else if (cfg.format == "csv") {
    text = export_table_csv(t);
  } else {
    std::ostringstream os;
    os << "n=" << t.n << " relevant bits:";
    for (auto b : t.relevant_bits) os << " f" << b;
    os << "\n";
    for (const auto& [key, value] : t.rows) os << foldscope::detail::render_tuple(key) << " -> S=" << value << " A=" << value + t.n - 1 << "\n";
    os << "S values " << foldscope::detail::render_set(t.value_set) << "\n";
    text = os.str();
  }
  emit(cfg, text, out);
  return kSuccess;
}

inline int cmd_export(const CliConfig& cfg, std::ostream& out) {
  std::string text;
  if (cfg.target == "dfao-dot")
    text = export_dot(build_pf_evaluator());
  else if (cfg.target == "dfao-table")
    text = export_table(build_pf_evaluator());
  else if (cfg.target == "classifier-csv")
    text = export_table_csv(table_for(cfg.length));
  else
    throw UsageError("unknown export target '" + cfg.target + "'");
  emit(cfg, text, out);
  return kSuccess;
}

}  // namespace detail

/// Runs the command line in `args` (args[0] is the program name). Returns
/// 0 on success, 1 when a verification fails, 2 on usage or input errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Paper-folding sequences: generation, appearance function and exhaustive checks", "foldscope"};
  app.require_subcommand(1);
  CliConfig cfg;

  auto add_format = [&](CLI::App* sub, std::vector<std::string> choices) {
    sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember(choices));
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", cfg.out_path, "Write output to a file"); };
  auto add_instr = [&](CLI::App* sub) {
    sub->add_option("-f,--instructions", cfg.instructions, "Folding instructions, e.g. '+;+' or '++-;+-'")->required();
  };

  auto* seq = app.add_subcommand("seq", "Print P_f[1:n]");
  add_instr(seq);
  seq->add_option("-n,--length", cfg.length, "Prefix length")->required()->check(CLI::PositiveNumber);
  seq->add_flag("--oeis", cfg.oeis, "Print -1 as 0 and +1 as 1");
  add_format(seq, {"text", "json"});
  add_out(seq);

  auto* eval = app.add_subcommand("eval", "Evaluate P_f[k] by formula and automaton");
  add_instr(eval);
  eval->add_option("-k", cfg.k, "Index k >= 1")->required();
  eval->add_option("--width", cfg.width, "Digits fed to the automaton (default bit length + 1)");
  add_format(eval, {"text", "json"});
  add_out(eval);

  auto* app_cmd = app.add_subcommand("appearance", "Compute S_f(n), A_f(n) by factor enumeration");
  add_instr(app_cmd);
  app_cmd->add_option("-n", cfg.length, "Factor length")->required();
  app_cmd->add_flag("--predict", cfg.predict, "Compare with the closed form (n >= 7)");
  add_format(app_cmd, {"text", "json"});
  add_out(app_cmd);

  auto* predict = app.add_subcommand("predict", "Closed-form S_f(n), A_f(n) for n >= 7");
  add_instr(predict);
  predict->add_option("-n", cfg.length, "Factor length")->required();
  add_format(predict, {"text", "json"});
  add_out(predict);

  auto* verify = app.add_subcommand("verify", "Run bounded exhaustive or sampled checks (JSON lines)");
  verify->add_option("--claim", cfg.claim, "formula-dfao|bounds|lemma1|lemma2|lemma3|theorem|corollary-tails|monotonicity|all")
      ->required();
  verify->add_option("--n-lo", cfg.n_lo, "Smallest factor length");
  verify->add_option("--n-hi,--n-max", cfg.n_hi, "Largest factor length (default 64)");
  verify->add_option("--mode", cfg.mode, "auto|exhaustive|sampled (auto: exhaustive up to n = 64)");
  verify->add_option("--samples", cfg.samples, "Random prefixes per n in sampled mode");
  verify->add_option("--seed", cfg.seed, "Seed for sampled mode");
  verify->add_option("--depth", cfg.depth, "Pattern bits for formula-dfao and monotonicity");
  verify->add_option("--k-bound", cfg.k_bound, "Largest k for formula-dfao")->check(CLI::PositiveNumber);
  add_out(verify);

  auto* classify = app.add_subcommand("classify", "Tabulate S_f(n) for n < 7 by relevant instruction bits");
  classify->add_option("-n", cfg.length, "Factor length 1..6")->required();
  add_format(classify, {"text", "json", "csv"});
  add_out(classify);

  auto* exp = app.add_subcommand("export", "Export the evaluator automaton or a classifier table");
  exp->add_option("target", cfg.target, "dfao-dot|dfao-table|classifier-csv")->required();
  exp->add_option("-n", cfg.length, "Factor length for classifier-csv");
  add_out(exp);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*seq) return detail::cmd_seq(cfg, out);
    if (*eval) return detail::cmd_eval(cfg, out);
    if (*app_cmd) return detail::cmd_appearance(cfg, out);
    if (*predict) return detail::cmd_predict(cfg, out);
    if (*verify) return detail::cmd_verify(cfg, out);
    if (*classify) return detail::cmd_classify(cfg, out);
    if (*exp) return detail::cmd_export(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace foldscope::cli
