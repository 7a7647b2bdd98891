#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "force/io/formula_text.hpp"
#include "force/io/lexer.hpp"
#include "force/search_spec.hpp"

namespace force::io {

// Digest of everything that fixes the meaning of a clause: sorts, relations
// with their argument sorts, variable budgets, variable names and the
// quantification semantics.
inline std::string signature_digest(const SearchSpec& spec) {
  SearchSpec named = spec;
  named.ensure_var_names();
  std::string key;
  for (int s = 0; s < named.num_sorts(); ++s) {
    key += "sort " + named.signature.sort(s).name + " " + std::to_string(named.var_budget[s]);
    for (const auto& v : named.var_names[s]) key += " " + v;
    key += "\n";
  }
  for (const auto& r : named.signature.relations()) {
    key += "rel " + r.name;
    for (int a : r.arg_sorts) key += " " + named.signature.sort(a).name;
    key += "\n";
  }
  key += named.distinct ? "distinct on\n" : "distinct off\n";
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return std::string("fnv1a-") + buf;
}

// force-format v1
// clause-filter signature=fnv1a-<16 hex digits>
// <one canonical clause per line, sorted>
//
// A consumer admits a DNF candidate only if every clause formed by choosing
// one literal per cube is entailed by a listed clause.
inline std::string export_clause_filter(const SearchSpec& spec, std::vector<Formula> clauses) {
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());
  std::string out(kFormatHeader);
  out += "\nclause-filter signature=" + signature_digest(spec) + "\n";
  for (const auto& c : clauses) out += print_formula(spec, c) + "\n";
  return out;
}

inline std::vector<Formula> import_clause_filter(std::string_view text, const SearchSpec& spec) {
  TokenStream ts(tokenize_body(text, true), false);
  ts.skip_blank_lines();
  ts.expect("clause-filter");
  Token key = ts.expect_ident("'signature'");
  if (key.text != "signature") throw ParseError(key.line, key.column, "expected 'signature'");
  ts.expect("=");
  Token digest = ts.expect_ident("a signature digest");
  if (digest.text != signature_digest(spec))
    throw ParseError(digest.line, digest.column, "clause filter was produced for a different signature");
  ts.expect_newline();
  std::vector<Formula> out;
  for (;;) {
    ts.skip_blank_lines();
    if (ts.at_end()) break;
    Token start = ts.peek();
    Formula f = detail::parse_formula_tokens(ts, spec);
    if (!f.is_clause()) throw ParseError(start.line, start.column, "not a clause");
    out.push_back(std::move(f));
    ts.expect_newline();
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace force::io
