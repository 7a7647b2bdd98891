#pragma once

#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "force/io/lexer.hpp"
#include "force/search_spec.hpp"

namespace force::io {

// forall N1:node, N2:node. exists L1:lock. (~lock_msg(N1,L1) & grant_msg(N2,L1)) | ~unlock_msg(N1,L1)
//
// Consecutive bindings with the same quantifier share one block. Cubes are
// parenthesized only when the matrix has several cubes.
inline std::string print_formula(const SearchSpec& spec, const Formula& f) {
  std::ostringstream out;
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    const auto& b = f.prefix[i];
    bool opens = i == 0 || f.prefix[i - 1].quantifier != b.quantifier;
    if (opens) out << (i ? ". " : "") << (b.quantifier == Quantifier::kForall ? "forall " : "exists ");
    else out << ", ";
    out << spec.var_name(b.var) << ":" << spec.signature.sort(b.var.sort).name;
  }
  if (!f.prefix.empty()) out << ". ";
  for (std::size_t c = 0; c < f.matrix.size(); ++c) {
    const auto& cube = f.matrix[c];
    bool parens = f.matrix.size() > 1 && cube.size() > 1;
    out << (c ? " | " : "") << (parens ? "(" : "");
    for (std::size_t k = 0; k < cube.size(); ++k) {
      const auto& l = cube[k];
      out << (k ? " & " : "") << (l.negated ? "~" : "") << spec.signature.relation(l.rel).name << "(";
      for (std::size_t a = 0; a < l.arity; ++a) out << (a ? "," : "") << spec.var_name(l.args[a]);
      out << ")";
    }
    out << (parens ? ")" : "");
  }
  return out.str();
}

namespace detail {

// Parses one formula from `ts`, stopping before the end of its line.
inline Formula parse_formula_tokens(TokenStream& ts, const SearchSpec& spec) {
  Formula f;
  f.distinct = spec.distinct;
  std::map<std::string, Variable, std::less<>> bound;
  std::vector<std::vector<bool>> taken(static_cast<std::size_t>(spec.num_sorts()));
  for (int s = 0; s < spec.num_sorts(); ++s) taken[s].assign(static_cast<std::size_t>(spec.var_budget[s]), false);

  while (ts.peek().is("forall") || ts.peek().is("exists")) {
    Quantifier q = ts.next().text == "forall" ? Quantifier::kForall : Quantifier::kExists;
    do {
      Token name = ts.expect_ident("a variable name");
      ts.expect(":");
      Token sort = ts.expect_ident("a sort name");
      auto s = spec.signature.find_sort(sort.text);
      if (!s) throw ParseError(sort.line, sort.column, "unknown sort '" + sort.text + "'");
      if (bound.count(name.text)) throw ParseError(name.line, name.column, "variable '" + name.text + "' bound twice");
      // The declared variable of that name, otherwise the lowest free one.
      int idx = -1;
      for (int i = 0; i < spec.var_budget[*s]; ++i)
        if (spec.var_name(Variable{static_cast<std::uint8_t>(*s), static_cast<std::uint8_t>(i)}) == name.text) idx = i;
      if (idx >= 0 && taken[*s][idx]) idx = -1;
      for (int i = 0; idx < 0 && i < spec.var_budget[*s]; ++i)
        if (!taken[*s][i]) idx = i;
      if (idx < 0) throw ParseError(name.line, name.column, "too many variables of sort '" + sort.text + "'");
      taken[*s][idx] = true;
      Variable v{static_cast<std::uint8_t>(*s), static_cast<std::uint8_t>(idx)};
      bound.emplace(name.text, v);
      f.prefix.push_back({v, q});
    } while (ts.accept(","));
    ts.expect(".");
  }

  auto literal = [&]() {
    bool neg = ts.accept("~");
    Token rel = ts.expect_ident("a relation name");
    auto r = spec.signature.find_relation(rel.text);
    if (!r) throw ParseError(rel.line, rel.column, "unknown relation '" + rel.text + "'");
    const auto& decl = spec.signature.relation(*r);
    Literal l;
    l.rel = static_cast<std::uint16_t>(*r);
    l.negated = neg;
    ts.expect("(");
    do {
      Token v = ts.expect_ident("a variable");
      auto it = bound.find(v.text);
      if (it == bound.end()) throw ParseError(v.line, v.column, "unbound variable '" + v.text + "'");
      if (l.arity >= decl.arg_sorts.size())
        throw ParseError(v.line, v.column, "too many arguments for '" + rel.text + "'");
      if (it->second.sort != decl.arg_sorts[l.arity])
        throw ParseError(v.line, v.column, "variable '" + v.text + "' has the wrong sort");
      l.args[l.arity++] = it->second;
    } while (ts.accept(","));
    Token close = ts.expect(")");
    if (l.arity != decl.arg_sorts.size())
      throw ParseError(close.line, close.column, "'" + rel.text + "' expects " + std::to_string(decl.arg_sorts.size()) + " arguments");
    return l;
  };

  do {
    Cube cube;
    do {
      if (ts.accept("(")) {
        do cube.push_back(literal());
        while (ts.accept("&"));
        ts.expect(")");
      } else {
        cube.push_back(literal());
      }
    } while (ts.accept("&"));
    f.matrix.push_back(std::move(cube));
  } while (ts.accept("|"));
  return f;
}

}  // namespace detail

inline Formula parse_formula(std::string_view text, const SearchSpec& spec) {
  TokenStream ts(tokenize(text), true);
  Formula f = detail::parse_formula_tokens(ts, spec);
  if (!ts.at_end()) ts.fail("expected end of formula");
  return f;
}

// One formula per line; blank lines and comments are skipped.
inline std::vector<Formula> parse_formulas(std::string_view text, const SearchSpec& spec) {
  TokenStream ts(tokenize_body(text, false), false);
  std::vector<Formula> out;
  for (;;) {
    ts.skip_blank_lines();
    if (ts.at_end()) break;
    out.push_back(detail::parse_formula_tokens(ts, spec));
    ts.expect_newline();
  }
  return out;
}

inline std::string print_formulas(const SearchSpec& spec, const std::vector<Formula>& fs) {
  std::string out(kFormatHeader);
  out += "\n";
  for (const auto& f : fs) out += print_formula(spec, f) + "\n";
  return out;
}

}  // namespace force::io
