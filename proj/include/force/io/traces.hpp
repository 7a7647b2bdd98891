#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "force/io/lexer.hpp"
#include "force/search_spec.hpp"
#include "force/structure.hpp"

namespace force::io {

// Trace document:
//
//   force-format v1
//   universe: node=2 lock=1
//   sample step=0
//   server_holds_lock: (0)
//   end
//   sample step=1
//   lock_msg: (1,0)
//   server_holds_lock: (0)
//   end
//
// A `universe:` line applies to the samples after it and must size every
// sort. Relations not listed in a sample are empty. `key=value` pairs on a
// sample line are metadata and ignored. Identical samples are merged.
inline std::vector<Structure> parse_traces(std::string_view text, const Signature& sig) {
  TokenStream ts(tokenize_body(text, false), false);
  std::vector<Structure> out;
  std::vector<int> universe;
  auto skip_metadata = [&] {
    while (ts.peek().kind == Token::kIdent || ts.peek().kind == Token::kNumber) {
      ts.next();
      ts.expect("=");
      if (ts.peek().kind != Token::kIdent && ts.peek().kind != Token::kNumber) ts.fail("expected a value");
      ts.next();
    }
  };

  for (;;) {
    ts.skip_blank_lines();
    if (ts.at_end()) break;
    Token head = ts.expect_ident("'universe' or 'sample'");
    if (head.text == "universe") {
      ts.expect(":");
      std::vector<int> sizes(static_cast<std::size_t>(sig.num_sorts()), 0);
      while (ts.peek().kind == Token::kIdent) {
        Token s = ts.next();
        auto idx = sig.find_sort(s.text);
        if (!idx) throw ParseError(s.line, s.column, "unknown sort '" + s.text + "'");
        if (sizes[*idx]) throw ParseError(s.line, s.column, "sort '" + s.text + "' sized twice");
        ts.expect("=");
        Token at = ts.peek();
        long long n = ts.expect_number("a universe size");
        if (n < 1) throw ParseError(at.line, at.column, "universe sizes must be positive");
        sizes[*idx] = static_cast<int>(n);
      }
      for (int s = 0; s < sig.num_sorts(); ++s)
        if (!sizes[s]) throw ParseError(head.line, head.column, "universe of sort '" + sig.sort(s).name + "' missing");
      ts.expect_newline();
      universe = std::move(sizes);
    } else if (head.text == "sample") {
      if (universe.empty()) throw ParseError(head.line, head.column, "sample before any 'universe' line");
      skip_metadata();
      ts.expect_newline();
      Structure m(sig, universe);
      std::set<int> listed;
      for (;;) {
        ts.skip_blank_lines();
        Token rel = ts.expect_ident("a relation name or 'end'");
        if (rel.text == "end") break;
        auto r = sig.find_relation(rel.text);
        if (!r) throw ParseError(rel.line, rel.column, "unknown relation '" + rel.text + "'");
        if (!listed.insert(*r).second) throw ParseError(rel.line, rel.column, "relation '" + rel.text + "' listed twice");
        const auto& decl = sig.relation(*r);
        ts.expect(":");
        while (ts.peek().is("(")) {
          Token open = ts.next();
          std::vector<int> tuple;
          do {
            Token at = ts.peek();
            long long e = ts.expect_number("an element index");
            std::size_t pos = tuple.size();
            if (pos >= decl.arg_sorts.size()) throw ParseError(at.line, at.column, "too many arguments");
            int size = universe[decl.arg_sorts[pos]];
            if (e >= size)
              throw ParseError(at.line, at.column,
                               "element " + std::to_string(e) + " out of range for sort '" +
                                   sig.sort(decl.arg_sorts[pos]).name + "' of size " + std::to_string(size));
            tuple.push_back(static_cast<int>(e));
          } while (ts.accept(","));
          ts.expect(")");
          if (tuple.size() != decl.arg_sorts.size())
            throw ParseError(open.line, open.column, "relation '" + rel.text + "' expects " +
                                                         std::to_string(decl.arg_sorts.size()) + " arguments");
          m.set(*r, tuple);
        }
        ts.expect_newline();
      }
      ts.expect_newline();
      if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(std::move(m));
    } else {
      throw ParseError(head.line, head.column, "expected 'universe' or 'sample', found '" + head.text + "'");
    }
  }
  if (out.empty()) throw ParseError(1, 1, "trace document contains no sample");
  return out;
}

// `labels[i]`, when present, is written after `sample` as metadata.
inline std::string print_traces(const Signature& sig, const std::vector<Structure>& samples,
                                const std::vector<std::string>& labels = {}) {
  std::ostringstream out;
  out << kFormatHeader << "\n";
  const std::vector<int>* current = nullptr;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& m = samples[i];
    if (!current || *current != m.universe()) {
      out << "universe:";
      for (int s = 0; s < sig.num_sorts(); ++s) out << " " << sig.sort(s).name << "=" << m.universe(s);
      out << "\n";
      current = &m.universe();
    }
    out << "sample";
    if (i < labels.size() && !labels[i].empty()) out << " " << labels[i];
    out << "\n";
    for (int r = 0; r < sig.num_relations(); ++r) {
      auto tuples = m.tuples(r);
      if (tuples.empty()) continue;
      out << sig.relation(r).name << ":";
      for (const auto& t : tuples) {
        out << " (";
        for (std::size_t k = 0; k < t.size(); ++k) out << (k ? "," : "") << t[k];
        out << ")";
      }
      out << "\n";
    }
    out << "end\n";
  }
  return out.str();
}

}  // namespace force::io
