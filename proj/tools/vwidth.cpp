// vwidth: widths and witnesses for verbal subgroups of triangular groups.
//
// Exit codes: 0 ok, 2 parse error, 3 domain error (including NotInVerbal),
// 4 search exhausted, 5 verification mismatch, 6 guard exceeded, 1 internal.

#include "vwidth/vwidth.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace vwidth;

enum Exit : int { kOk = 0, kInternal = 1, kParse = 2, kDomain = 3, kExhausted = 4, kMismatch = 5, kGuard = 6 };

int exit_code(ErrorCode code) {
  switch (code) {
  case ErrorCode::ParseError:
  case ErrorCode::SyntaxError:
  case ErrorCode::NonPrimeP:
  case ErrorCode::ReducibleModulus: return kParse;
  case ErrorCode::SearchExhausted: return kExhausted;
  case ErrorCode::GuardExceeded: return kGuard;
  default: return kDomain;
  }
}

struct WordChoice {
  std::string word;
  std::uint64_t s = 0;

  Word resolve() const {
    if (!word.empty() && s)
      throw Error(ErrorCode::ParseError, "give either --word or --s, not both");
    if (!word.empty())
      return parse_word(word);
    if (s)
      return Word::power(s);
    throw Error(ErrorCode::ParseError, "one of --word or --s is required");
  }
};

void add_word_options(CLI::App *cmd, WordChoice &choice) {
  cmd->add_option("--word", choice.word, "word, e.g. \"[[x1,x2],x3]\" or \"x^6\"");
  cmd->add_option("--s", choice.s, "exponent of the power word x^s")->check(CLI::PositiveNumber);
}

Json read_json(const std::string &path) {
  std::string text;
  if (path.empty() || path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path);
    if (!in)
      throw Error(ErrorCode::ParseError, "cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

std::vector<GridCell> default_grid() {
  std::vector<GridCell> grid;
  for (const char *field : {"gf2", "gf3", "gf4", "gf5"})
    for (std::size_t n = 2; n <= 4; ++n)
      for (int s = 1; s <= 8; ++s)
        grid.push_back({parse_field_shorthand(field), n, "x^" + std::to_string(s)});
  for (std::size_t n = 3; n <= 4; ++n)
    for (const char *w : {"[x1,x2]", "[[x1,x2],x3]", "[[x1,x2],[x3,x4]]"})
      grid.push_back({gf(3), n, w});
  grid.push_back({gf(2), 5, "x^2"});
  return grid;
}

int cmd_predict(const std::string &field, std::size_t n, const WordChoice &choice, bool finitary) {
  const FieldSpec spec = parse_field_shorthand(field);
  const Word w = choice.resolve();
  Json out;
  if (w.is_power()) {
    const WidthPrediction p = width_predict(spec, n, w.exponent(), finitary);
    out["width"] = p.width;
    out["case"] = p.case_label;
  } else {
    if (!validate_outer(w))
      throw Error(ErrorCode::InvalidWord, w.to_string() + " repeats a variable");
    // v(FT(K), w) is the finitary level subgroup, never trivial
    out["width"] = finitary ? 1 : outer_width_predict(w, spec, n);
    out["case"] = "outer";
  }
  if (!finitary)
    out["descriptor"] = descriptor_to_json(verbal_descriptor(w, spec, n));
  std::cout << out.dump() << '\n';
  return kOk;
}

int cmd_decompose(const WordChoice &choice, const std::string &input, const std::string &field, bool finitary,
                  const PowerSearchOptions &opts) {
  const Word w = choice.resolve();
  const Json in = read_json(input);
  std::optional<FieldSpec> fallback;
  if (!field.empty())
    fallback = parse_field_shorthand(field);
  if (finitary) {
    const FinitaryMat f = finitary_from_json(in);
    if (w.is_power()) {
      const FinitaryPowerWitness pw = finitary_power_decompose(f, w.exponent(), opts);
      if (!verify_finitary_witness(pw, f)) {
        std::cerr << "error: witness failed re-verification\n";
        return kMismatch;
      }
      std::cout << finitary_witness_to_json(pw).dump() << '\n';
    } else {
      const FinitaryWordWitness ww = finitary_outer_witness(w, f);
      Json out;
      out["word"] = w.to_string();
      out["assign"] = Json::object();
      for (const auto &[var, m] : ww.assign)
        out["assign"]["x" + std::to_string(var)] = finitary_to_json(m);
      std::cout << out.dump() << '\n';
    }
    return kOk;
  }
  const TriMat target = matrix_from_json(in, fallback);
  if (w.is_power()) {
    const PowerWitness pw = power_decompose(target, w.exponent(), opts);
    // independent re-check by repeated multiplication (square-and-multiply
    // only for exponents too large to unroll)
    TriMat product = TriMat::identity(target.spec(), target.n());
    for (const auto &factor : pw.factors) {
      TriMat p = TriMat::identity(target.spec(), target.n());
      if (pw.s <= 4096) {
        for (std::uint64_t i = 0; i < pw.s; ++i)
          p = p * factor;
      } else {
        p = factor.pow(static_cast<long long>(pw.s));
      }
      product = product * p;
    }
    if (product != target) {
      std::cerr << "error: witness failed re-verification\n";
      return kMismatch;
    }
    std::cout << witness_to_json(pw).dump() << '\n';
  } else {
    const WordWitness ww = outer_witness(w, target);
    if (!verify_word_witness(ww, target)) {
      std::cerr << "error: witness failed re-verification\n";
      return kMismatch;
    }
    std::cout << word_witness_to_json(ww).dump() << '\n';
  }
  return kOk;
}

int cmd_membership(const WordChoice &choice, const std::string &input, const std::string &field) {
  const Word w = choice.resolve();
  std::optional<FieldSpec> fallback;
  if (!field.empty())
    fallback = parse_field_shorthand(field);
  const TriMat target = matrix_from_json(read_json(input), fallback);
  const VerbalDescriptor d = verbal_descriptor(w, target.spec(), target.n());
  Json out;
  out["member"] = membership(target, d);
  out["descriptor"] = descriptor_to_json(d);
  std::cout << out.dump() << '\n';
  return kOk;
}

int cmd_brute_width(const std::string &word, const std::string &field, std::size_t n, std::uint64_t guard) {
  const Word w = parse_word(word);
  std::cout << exact_width(w, parse_field_shorthand(field), n, guard) << '\n';
  return kOk;
}

int cmd_verify(bool use_default, const std::string &grid_path, const std::string &out_path,
               const CrossValidateOptions &opts) {
  if (use_default == !grid_path.empty())
    throw Error(ErrorCode::ParseError, "give exactly one of --default or --grid");
  const std::vector<GridCell> grid = use_default ? default_grid() : grid_from_json(read_json(grid_path));
  std::ofstream out(out_path);
  if (!out)
    throw Error(ErrorCode::ParseError, "cannot write " + out_path);
  std::size_t failed = 0;
  std::unique_ptr<BruteGroup> group;
  for (const auto &cell : grid) {
    if (!group || group->spec() != cell.spec || group->n() != cell.n)
      group = std::make_unique<BruteGroup>(cell.spec, cell.n, opts.guard);
    const CellReport r = cross_validate_cell(*group, cell, opts);
    out << report_to_json(r).dump() << '\n';
    if (!r.ok()) {
      ++failed;
      std::cerr << "MISMATCH " << r.field << " n=" << r.n << " " << r.word << ": " << r.detail << '\n';
    }
  }
  std::cout << grid.size() - failed << "/" << grid.size() << " cells agree; report written to " << out_path
            << '\n';
  return failed ? kMismatch : kOk;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Widths and witnesses for verbal subgroups of triangular matrix groups"};
  app.require_subcommand(1);

  std::string field;
  std::size_t n = 2;
  WordChoice choice;
  bool finitary = false;
  std::string input = "-";
  std::uint64_t seed = 0;
  std::uint64_t guard = kOracleGuard;

  auto *predict = app.add_subcommand("predict", "predicted width and case");
  predict->add_option("--field", field, "gf<p>, gf<q>, gf<p>_<k> or q")->required();
  predict->add_option("--n", n, "matrix size")->check(CLI::PositiveNumber);
  add_word_options(predict, choice);
  predict->add_flag("--finitary", finitary, "width in FT(K) instead of T_n(K)");

  auto *decompose = app.add_subcommand("decompose", "verified witness for a matrix read as JSON");
  add_word_options(decompose, choice);
  decompose->add_option("--input", input, "JSON file (default stdin)");
  decompose->add_option("--field", field, "field for bare entry arrays");
  decompose->add_flag("--finitary", finitary, "input is a finitary matrix {\"field\",\"corner_n\",\"entries\"}");
  decompose->add_option("--seed", seed, "seed for randomized search paths");

  auto *member = app.add_subcommand("membership", "is the matrix in the verbal subgroup");
  add_word_options(member, choice);
  member->add_option("--input", input, "JSON file (default stdin)");
  member->add_option("--field", field, "field for bare entry arrays");

  std::string word;
  auto *brute = app.add_subcommand("brute-width", "exact width by exhaustive search");
  brute->add_option("--word", word, "word")->required();
  brute->add_option("--field", field, "finite field shorthand")->required();
  brute->add_option("--n", n, "matrix size")->required()->check(CLI::PositiveNumber);
  brute->add_option("--guard", guard, "maximum group order");

  bool use_default = false;
  std::string grid_path, out_path = "verify_report.jsonl";
  auto *verify = app.add_subcommand("verify-theorems", "cross-validate predictions and witnesses against brute force");
  verify->add_flag("--default", use_default, "built-in grid");
  verify->add_option("--grid", grid_path, "grid JSON file");
  verify->add_option("--out", out_path, "JSON-lines report path");
  verify->add_option("--seed", seed, "seed for witness sampling");
  verify->add_option("--guard", guard, "maximum group order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kParse;
  }

  try {
    PowerSearchOptions search;
    if (*predict)
      return cmd_predict(field, n, choice, finitary);
    if (*decompose)
      return cmd_decompose(choice, input, field, finitary, search);
    if (*member)
      return cmd_membership(choice, input, field);
    if (*brute)
      return cmd_brute_width(word, field, n, guard);
    if (*verify) {
      CrossValidateOptions opts;
      opts.seed = seed;
      opts.guard = guard;
      return cmd_verify(use_default, grid_path, out_path, opts);
    }
  } catch (const Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const InvariantViolation &e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
