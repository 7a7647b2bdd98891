#pragma once

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "force/io/lexer.hpp"
#include "force/search_spec.hpp"

namespace force::io {

namespace detail {

inline bool is_top_key(const Token& t) {
  static const std::set<std::string, std::less<>> keys = {"var",     "relations", "max-literal", "max-or",
                                                          "max-and", "max-exists", "distinct"};
  return t.kind == Token::kIdent && keys.count(t.text) > 0;
}

inline void check_identifier(const Token& t, std::string_view what) {
  if (t.text.find('-') != std::string::npos) throw ParseError(t.line, t.column, "invalid " + std::string(what) + " name '" + t.text + "'");
}

}  // namespace detail

// Search-space config:
//
//   var: node: n1, n2; lock: l1
//   relations: lock_msg: node, lock; server_holds_lock: lock
//   max-literal: 4 max-or: 3 max-and: 3 max-exists: 1
//   distinct: on
//
// Layout is free; '#' starts a comment; `distinct` is optional (default on).
inline SearchSpec parse_config(std::string_view text) {
  TokenStream ts(tokenize_body(text, false), true);
  SearchSpec spec;
  std::set<std::string> seen;
  std::set<std::string> var_names;
  bool have_vars = false, have_rels = false;
  std::optional<int> budgets[4];
  static const char* budget_keys[4] = {"max-literal", "max-or", "max-and", "max-exists"};

  while (!ts.at_end()) {
    Token key = ts.peek();
    if (key.kind != Token::kIdent) ts.fail("expected a key");
    if (!detail::is_top_key(key)) throw ParseError(key.line, key.column, "unknown key '" + key.text + "'");
    ts.next();
    ts.expect(":");
    if (!seen.insert(key.text).second) throw ParseError(key.line, key.column, "duplicate key '" + key.text + "'");

    if (key.text == "var") {
      have_vars = true;
      while (ts.peek().kind == Token::kIdent && !detail::is_top_key(ts.peek())) {
        Token sort = ts.next();
        detail::check_identifier(sort, "sort");
        if (spec.signature.find_sort(sort.text))
          throw ParseError(sort.line, sort.column, "duplicate sort '" + sort.text + "'");
        spec.signature.add_sort(sort.text);
        ts.expect(":");
        std::vector<std::string> names;
        do {
          Token v = ts.expect_ident("a variable name");
          detail::check_identifier(v, "variable");
          if (!var_names.insert(v.text).second)
            throw ParseError(v.line, v.column, "duplicate variable '" + v.text + "'");
          names.push_back(v.text);
        } while (ts.accept(","));
        spec.var_budget.push_back(static_cast<int>(names.size()));
        spec.var_names.push_back(std::move(names));
        if (!ts.accept(";")) break;
      }
      if (spec.signature.num_sorts() == 0) ts.fail("expected a sort declaration");
    } else if (key.text == "relations") {
      if (!have_vars) throw ParseError(key.line, key.column, "'relations' must follow 'var'");
      have_rels = true;
      while (ts.peek().kind == Token::kIdent && !detail::is_top_key(ts.peek())) {
        Token rel = ts.next();
        detail::check_identifier(rel, "relation");
        if (spec.signature.find_relation(rel.text))
          throw ParseError(rel.line, rel.column, "duplicate relation '" + rel.text + "'");
        ts.expect(":");
        std::vector<int> args;
        do {
          Token s = ts.expect_ident("a sort name");
          auto idx = spec.signature.find_sort(s.text);
          if (!idx) throw ParseError(s.line, s.column, "undeclared sort '" + s.text + "'");
          args.push_back(*idx);
        } while (ts.accept(","));
        if (args.size() > kMaxArity)
          throw ParseError(rel.line, rel.column, "relation '" + rel.text + "' exceeds the maximum arity");
        spec.signature.add_relation(rel.text, std::move(args));
        if (!ts.accept(";")) break;
      }
      if (spec.signature.num_relations() == 0) ts.fail("expected a relation declaration");
    } else if (key.text == "distinct") {
      Token v = ts.expect_ident("'on' or 'off'");
      if (v.text == "on") spec.distinct = true;
      else if (v.text == "off") spec.distinct = false;
      else throw ParseError(v.line, v.column, "expected 'on' or 'off'");
    } else {
      int k = 0;
      while (key.text != budget_keys[k]) ++k;
      Token at = ts.peek();
      long long n = ts.expect_number("a number");
      if (k < 3 && n < 1) throw ParseError(at.line, at.column, "'" + key.text + "' must be positive");
      budgets[k] = static_cast<int>(n);
    }
  }

  if (!have_vars) throw ParseError(1, 1, "missing required key 'var'");
  if (!have_rels) throw ParseError(1, 1, "missing required key 'relations'");
  for (int k = 0; k < 4; ++k)
    if (!budgets[k]) throw ParseError(1, 1, std::string("missing required key '") + budget_keys[k] + "'");
  spec.max_literal = *budgets[0];
  spec.max_or = *budgets[1];
  spec.max_and = *budgets[2];
  spec.max_exists = *budgets[3];
  spec.validate();
  return spec;
}

inline std::string print_config(const SearchSpec& spec) {
  SearchSpec named = spec;
  named.ensure_var_names();
  std::ostringstream out;
  out << kFormatHeader << "\nvar:";
  for (int s = 0; s < named.num_sorts(); ++s) {
    out << (s ? "; " : " ") << named.signature.sort(s).name << ":";
    for (std::size_t i = 0; i < named.var_names[s].size(); ++i) out << (i ? ", " : " ") << named.var_names[s][i];
  }
  out << "\nrelations:";
  for (int r = 0; r < named.signature.num_relations(); ++r) {
    const auto& rel = named.signature.relation(r);
    out << (r ? "; " : " ") << rel.name << ":";
    for (std::size_t i = 0; i < rel.arg_sorts.size(); ++i)
      out << (i ? ", " : " ") << named.signature.sort(rel.arg_sorts[i]).name;
  }
  out << "\nmax-literal: " << spec.max_literal << " max-or: " << spec.max_or << " max-and: " << spec.max_and
      << " max-exists: " << spec.max_exists << "\ndistinct: " << (spec.distinct ? "on" : "off") << "\n";
  return out.str();
}

}  // namespace force::io
