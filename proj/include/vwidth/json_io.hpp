#pragma once

// JSON forms of fields, matrices, descriptors, witnesses and oracle reports.

#include "vwidth/commwidth.hpp"
#include "vwidth/error.hpp"
#include "vwidth/field.hpp"
#include "vwidth/oracle.hpp"
#include "vwidth/powerwidth.hpp"
#include "vwidth/trimat.hpp"
#include "vwidth/words.hpp"

#include <json.hpp>

#include <cctype>
#include <string>
#include <vector>

namespace vwidth {

using Json = nlohmann::ordered_json;

/// "q", "gf<q>" for a prime or prime power q, or "gf<p>_<k>".
inline FieldSpec parse_field_shorthand(const std::string &text) {
  if (text == "q" || text == "Q")
    return rationals();
  auto number = [&](std::size_t from, std::size_t to) -> std::uint64_t {
    if (from >= to || to - from > 9)
      throw Error(ErrorCode::ParseError, "bad field shorthand '" + text + "'");
    std::uint64_t v = 0;
    for (std::size_t i = from; i < to; ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw Error(ErrorCode::ParseError, "bad field shorthand '" + text + "'");
      v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
    }
    return v;
  };
  if (text.size() < 3 || text.compare(0, 2, "gf") != 0)
    throw Error(ErrorCode::ParseError, "bad field shorthand '" + text + "'");
  const auto underscore = text.find('_');
  if (underscore != std::string::npos) {
    const auto p = number(2, underscore);
    const auto k = number(underscore + 1, text.size());
    return gf(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(k));
  }
  const auto q = number(2, text.size());
  if (q < 2)
    throw Error(ErrorCode::NonPrimeP, text + " is not a field order");
  const auto factors = detail::prime_factors(q);
  if (factors.size() != 1)
    throw Error(ErrorCode::NonPrimeP, std::to_string(q) + " is not a prime power");
  std::uint32_t k = 0;
  for (std::uint64_t r = q; r > 1; r /= factors[0])
    ++k;
  return gf(static_cast<std::uint32_t>(factors[0]), k);
}

inline Json field_to_json(const FieldSpec &spec) {
  Json j;
  switch (spec.kind()) {
  case FieldKind::Rationals: j["kind"] = "rationals"; return j;
  case FieldKind::Prime:
    j["kind"] = "prime";
    j["p"] = spec.p();
    j["k"] = 1;
    return j;
  case FieldKind::PrimePower:
    j["kind"] = "prime-power";
    j["p"] = spec.p();
    j["k"] = spec.k();
    j["modulus"] = spec.modulus();
    return j;
  }
  return j;
}

/// Object form {"kind","p","k","modulus"} or a shorthand string.
inline FieldSpec field_from_json(const Json &j) {
  try {
    if (j.is_string())
      return parse_field_shorthand(j.get<std::string>());
    if (!j.is_object() || !j.contains("kind"))
      throw Error(ErrorCode::ParseError, "field must be a shorthand string or an object with \"kind\"");
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "rationals")
      return rationals();
    const auto p = j.at("p").get<std::uint32_t>();
    if (kind == "prime")
      return make_field(FieldKind::Prime, p);
    if (kind == "prime-power") {
      const auto k = j.value("k", 1U);
      std::optional<std::vector<std::uint32_t>> modulus;
      if (j.contains("modulus"))
        modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
      return make_field(FieldKind::PrimePower, p, k, modulus);
    }
    throw Error(ErrorCode::ParseError, "unknown field kind '" + kind + "'");
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("field JSON: ") + e.what());
  }
}

namespace detail {

inline FieldElem elem_from_json(const FieldSpec &spec, const Json &j) {
  if (j.is_string())
    return parse_elem(spec, j.get<std::string>());
  if (j.is_number_integer())
    return parse_elem(spec, std::to_string(j.get<long long>()));
  throw Error(ErrorCode::ParseError, "matrix entry must be a string or an integer");
}

inline Json entries_to_json(const TriMat &m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.n(); ++j)
      row.push_back(j < i ? std::string("0") : m.at(i, j).to_string());
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Square rows, or upper rows of lengths n, n-1, ..., 1.
inline TriMat entries_from_json(const FieldSpec &spec, std::size_t n, const Json &rows) {
  if (!rows.is_array() || rows.size() != n)
    throw Error(ErrorCode::ParseError, "entries must have " + std::to_string(n) + " rows");
  std::vector<std::vector<FieldElem>> out(n, std::vector<FieldElem>(n, FieldElem::zero(spec)));
  for (std::size_t i = 0; i < n; ++i) {
    const Json &row = rows[i];
    if (!row.is_array())
      throw Error(ErrorCode::ParseError, "matrix row must be an array");
    if (row.size() == n) {
      for (std::size_t j = 0; j < n; ++j)
        out[i][j] = elem_from_json(spec, row[j]);
    } else if (row.size() == n - i) {
      for (std::size_t j = i; j < n; ++j)
        out[i][j] = elem_from_json(spec, row[j - i]);
    } else {
      throw Error(ErrorCode::ParseError, "row " + std::to_string(i) + " has the wrong length");
    }
  }
  return mat_make(spec, n, out);
}

} // namespace detail

inline Json matrix_to_json(const TriMat &m) {
  Json j;
  j["field"] = field_to_json(m.spec());
  j["n"] = m.n();
  j["entries"] = detail::entries_to_json(m);
  return j;
}

inline TriMat matrix_from_json(const Json &j) {
  try {
    const FieldSpec spec = field_from_json(j.at("field"));
    const auto n = j.at("n").get<std::size_t>();
    if (n < 1)
      throw Error(ErrorCode::BadSize, "matrix size must be positive");
    return detail::entries_from_json(spec, n, j.at("entries"));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("matrix JSON: ") + e.what());
  }
}

/// Accepts a full matrix object, or bare entries with `fallback` supplying the field.
inline TriMat matrix_from_json(const Json &j, const std::optional<FieldSpec> &fallback) {
  if (j.is_array()) {
    if (!fallback)
      throw Error(ErrorCode::ParseError, "bare entries need a field");
    return detail::entries_from_json(*fallback, j.size(), j);
  }
  return matrix_from_json(j);
}

inline Json finitary_to_json(const FinitaryMat &f) {
  Json j;
  j["field"] = field_to_json(f.spec());
  j["corner_n"] = f.corner_size();
  j["entries"] = detail::entries_to_json(f.corner());
  return j;
}

inline FinitaryMat finitary_from_json(const Json &j) {
  try {
    const FieldSpec spec = field_from_json(j.at("field"));
    const auto m = j.at("corner_n").get<std::size_t>();
    if (m < 1)
      throw Error(ErrorCode::BadSize, "corner size must be positive");
    return fin_make(detail::entries_from_json(spec, m, j.at("entries")));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("finitary JSON: ") + e.what());
  }
}

inline Json descriptor_to_json(const VerbalDescriptor &d) {
  Json j;
  j["kind"] = to_string(d.kind);
  j["level"] = d.kind == VerbalKind::Level ? Json(d.level) : Json(nullptr);
  j["s"] = d.exponent ? Json(d.exponent) : Json(nullptr);
  j["case"] = to_string(d.power_case);
  return j;
}

inline Json witness_to_json(const PowerWitness &w) {
  Json j;
  j["s"] = w.s;
  j["factors"] = Json::array();
  for (const auto &f : w.factors)
    j["factors"].push_back(matrix_to_json(f));
  j["case"] = w.case_label;
  j["strategy"] = w.strategy;
  return j;
}

inline PowerWitness witness_from_json(const Json &j) {
  try {
    PowerWitness w;
    w.s = j.at("s").get<std::uint64_t>();
    for (const auto &f : j.at("factors"))
      w.factors.push_back(matrix_from_json(f));
    w.case_label = j.value("case", "");
    w.strategy = j.value("strategy", "");
    return w;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("witness JSON: ") + e.what());
  }
}

inline Json finitary_witness_to_json(const FinitaryPowerWitness &w) {
  Json j;
  j["s"] = w.s;
  j["factors"] = Json::array();
  for (const auto &f : w.factors)
    j["factors"].push_back(finitary_to_json(f));
  j["case"] = w.case_label;
  j["strategy"] = w.strategy;
  return j;
}

inline Json word_witness_to_json(const WordWitness &w) {
  Json j;
  j["word"] = w.word.to_string();
  j["assign"] = Json::object();
  for (const auto &[var, m] : w.assign)
    j["assign"]["x" + std::to_string(var)] = matrix_to_json(m);
  return j;
}

inline WordWitness word_witness_from_json(const Json &j) {
  try {
    WordWitness w{parse_word(j.at("word").get<std::string>()), {}, {}, 0};
    for (const auto &[key, value] : j.at("assign").items()) {
      if (key.size() < 2 || key[0] != 'x')
        throw Error(ErrorCode::ParseError, "bad variable name '" + key + "'");
      const unsigned var = static_cast<unsigned>(std::stoul(key.substr(1)));
      TriMat m = matrix_from_json(value);
      w.spec = m.spec();
      w.n = m.n();
      w.assign.emplace(var, std::move(m));
    }
    return w;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("word witness JSON: ") + e.what());
  }
}

inline Json report_to_json(const CellReport &r) {
  Json j;
  j["q"] = r.q;
  j["n"] = r.n;
  j["word"] = r.word;
  j["predicted"] = r.predicted;
  j["exact"] = r.exact;
  j["descriptor_ok"] = r.descriptor_ok;
  j["witnesses_ok"] = r.witnesses_ok;
  j["field"] = r.field;
  j["inverse_closed"] = r.inverse_closed;
  j["subgroup_order"] = r.subgroup_order;
  j["witnesses_checked"] = r.witnesses_checked;
  j["coverage"] = r.coverage;
  if (!r.detail.empty())
    j["detail"] = r.detail;
  return j;
}

/// Grid file: {"cells": [{"field", "n", "word"}, ...]} and/or the product
/// {"fields": [...], "sizes": [...], "words": [...]}.
inline std::vector<GridCell> grid_from_json(const Json &j) {
  try {
    if (!j.is_object())
      throw Error(ErrorCode::ParseError, "grid must be a JSON object");
    std::vector<GridCell> out;
    if (j.contains("fields") || j.contains("sizes") || j.contains("words")) {
      for (const auto &f : j.at("fields")) {
        const FieldSpec spec = field_from_json(f);
        for (const auto &n : j.at("sizes"))
          for (const auto &w : j.at("words"))
            out.push_back({spec, n.get<std::size_t>(), w.get<std::string>()});
      }
    }
    if (j.contains("cells"))
      for (const auto &c : j.at("cells"))
        out.push_back({field_from_json(c.at("field")), c.at("n").get<std::size_t>(), c.at("word").get<std::string>()});
    for (const auto &cell : out) {
      parse_word(cell.word);
      if (cell.n < 1)
        throw Error(ErrorCode::BadSize, "grid size must be positive");
    }
    return out;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("grid JSON: ") + e.what());
  }
}

} // namespace vwidth
