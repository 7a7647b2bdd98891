#include <gtest/gtest.h>

#include <random>
#include <string>

#include "support/fixtures.hpp"

using namespace force;
using fixtures::parse;

namespace {

template <class F>
ParseError parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError raised";
  return ParseError(0, 0, "");
}

constexpr std::string_view kTwoSamples =
    "force-format v1\n"
    "universe: node=2 lock=1\n"
    "sample step=0\n"
    "server_holds_lock: (0)\n"
    "end\n"
    "sample step=1\n"
    "lock_msg: (1,0)\n"
    "server_holds_lock: (0)\n"
    "end\n";

}  // namespace

TEST(Config, LockservVerbatim) {
  auto spec = io::parse_config(kLockservConfig);
  EXPECT_EQ(spec.num_sorts(), 2);
  EXPECT_EQ(spec.signature.num_relations(), 5);
  EXPECT_EQ(spec.var_budget, (std::vector<int>{2, 1}));
  EXPECT_EQ(spec.max_literal, 4);
  EXPECT_EQ(spec.max_or, 3);
  EXPECT_EQ(spec.max_and, 3);
  EXPECT_EQ(spec.max_exists, 1);
  EXPECT_TRUE(spec.distinct);
  const auto& lm = spec.signature.relation(*spec.signature.find_relation("lock_msg"));
  EXPECT_EQ(lm.arg_sorts, (std::vector<int>{0, 1}));
}

TEST(Config, Toy) {
  auto spec = io::parse_config(kToyConfig);
  EXPECT_EQ(spec.var_budget, std::vector<int>{1});
  EXPECT_EQ(spec.signature.num_relations(), 3);
  EXPECT_EQ(spec.max_and, 1);
  EXPECT_EQ(spec.max_exists, 0);
}

TEST(Config, RoundTripAndDistinctFlag) {
  auto spec = io::parse_config(std::string(kLockservConfig) + "distinct: off\n");
  EXPECT_FALSE(spec.distinct);
  auto again = io::parse_config(io::print_config(spec));
  EXPECT_EQ(io::print_config(again), io::print_config(spec));
  EXPECT_EQ(io::signature_digest(again), io::signature_digest(spec));
}

TEST(Config, Errors) {
  EXPECT_THROW(io::parse_config("var: X: x1\nrelations: p: X\nmax-literal: 2 max-or: 2 max-and: 1\n"), ParseError);
  EXPECT_THROW(io::parse_config("var: X: x1\nrelations: p: Y\nmax-literal: 2 max-or: 2 max-and: 1 max-exists: 0\n"),
               ParseError);
  EXPECT_THROW(io::parse_config("var: X: x1\nrelations: p: X; p: X\nmax-literal: 2 max-or: 2 max-and: 1 max-exists: 0\n"),
               ParseError);
  EXPECT_THROW(io::parse_config(std::string(kToyConfig) + "max-or: 1\n"), ParseError);
  EXPECT_THROW(io::parse_config(std::string(kToyConfig) + "colour: red\n"), ParseError);
  EXPECT_THROW(io::parse_config("var: X: x1\nrelations: p: X\nmax-literal: 0 max-or: 2 max-and: 1 max-exists: 0\n"),
               ParseError);
  auto e = parse_error([] { io::parse_config("var: X: x1\nrelations: p: X; q: Z\nmax-literal: 1 max-or: 1 max-and: 1 max-exists: 0\n"); });
  EXPECT_EQ(e.line(), 2);
  EXPECT_NE(e.message().find("'Z'"), std::string::npos);
}

TEST(Traces, TwoSamples) {
  auto spec = lockserv_spec();
  auto ms = io::parse_traces(kTwoSamples, spec.signature);
  ASSERT_EQ(ms.size(), 2u);
  EXPECT_EQ(ms[0].universe(), (std::vector<int>{2, 1}));
  int lock_msg = *spec.signature.find_relation("lock_msg");
  EXPECT_TRUE(ms[1].holds(lock_msg, std::array{1, 0}));
  EXPECT_FALSE(ms[0].holds(lock_msg, std::array{1, 0}));
}

TEST(Traces, DuplicateSamplesMerge) {
  auto spec = lockserv_spec();
  std::string text(kTwoSamples);
  text += "sample step=2\nserver_holds_lock: (0)\nend\n";
  EXPECT_EQ(io::parse_traces(text, spec.signature).size(), 2u);
}

TEST(Traces, OutOfRangeElementReportsPosition) {
  auto spec = lockserv_spec();
  auto e = parse_error([&] {
    io::parse_traces("universe: node=2 lock=1\nsample\nlock_msg: (3,0)\nend\n", spec.signature);
  });
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 12);
  EXPECT_NE(e.message().find("out of range"), std::string::npos);
}

TEST(Traces, Errors) {
  auto sig = lockserv_spec().signature;
  EXPECT_THROW(io::parse_traces("", sig), ParseError);
  EXPECT_THROW(io::parse_traces("sample\nend\n", sig), ParseError);
  EXPECT_THROW(io::parse_traces("universe: node=2\nsample\nend\n", sig), ParseError);
  EXPECT_THROW(io::parse_traces("universe: node=2 lock=1\nsample\nfoo: (0)\nend\n", sig), ParseError);
  EXPECT_THROW(io::parse_traces("universe: node=2 lock=1\nsample\nlock_msg: (0)\nend\n", sig), ParseError);
  EXPECT_THROW(io::parse_traces("universe: node=2 lock=1\nsample\nlock_msg: (0,0)\n", sig), ParseError);
}

TEST(Traces, PrintRoundTrip) {
  auto spec = lockserv_spec();
  auto samples = LockservSim(spec.signature, 3, 2).run(6, 40, 9);
  std::vector<Structure> ms;
  std::vector<std::string> labels;
  for (const auto& s : samples) {
    if (std::find(ms.begin(), ms.end(), s.state) != ms.end()) continue;
    ms.push_back(s.state);
    labels.push_back(s.label);
  }
  auto text = io::print_traces(spec.signature, ms, labels);
  EXPECT_EQ(io::parse_traces(text, spec.signature), ms);
}

TEST(FormulaText, PrintExamples) {
  auto spec = lockserv_spec();
  const char* text = "forall N1:node, N2:node. exists L1:lock. (~lock_msg(N1,L1) & grant_msg(N2,L1)) | ~unlock_msg(N1,L1)";
  EXPECT_EQ(io::print_formula(spec, parse(spec, text)), text);
  const char* unit = "forall N1:node, L1:lock. ~holds_lock(N1,L1) & ~grant_msg(N1,L1)";
  EXPECT_EQ(io::print_formula(spec, parse(spec, unit)), unit);
  auto toy = toy_spec();
  EXPECT_EQ(io::print_formula(toy, parse(toy, "forall X1:X. p(X1) | ~r(X1)")), "forall X1:X. p(X1) | ~r(X1)");
}

TEST(FormulaText, RenamedVariablesParseByPosition) {
  auto spec = lockserv_spec();
  auto a = parse(spec, "forall A:node, B:node. exists C:lock. holds_lock(A,C) | ~holds_lock(B,C)");
  auto b = parse(spec, "forall N1:node, N2:node. exists L1:lock. holds_lock(N1,L1) | ~holds_lock(N2,L1)");
  EXPECT_EQ(a, b);
}

TEST(FormulaText, Errors) {
  auto spec = lockserv_spec();
  EXPECT_THROW(parse(spec, "forall N1:node. holds_lock(N1,L1)"), ParseError);
  EXPECT_THROW(parse(spec, "forall N1:node, L1:lock. holds_lock(L1,N1)"), ParseError);
  EXPECT_THROW(parse(spec, "forall N1:node, N2:node, N3:node. lock_msg(N1,N1)"), ParseError);
  EXPECT_THROW(parse(spec, "forall L1:lock. server_holds_lock(L1) |"), ParseError);
  EXPECT_THROW(parse(spec, "forall L1:lock. nope(L1)"), ParseError);
}

TEST(FormulaText, RandomRoundTrip) {
  for (auto spec : {lockserv_spec(), toy_spec()}) {
    std::mt19937_64 rng(77);
    std::vector<Formula> fs;
    for (int i = 0; i < 1000; ++i) fs.push_back(fixtures::random_canonical(spec, rng));
    auto text = io::print_formulas(spec, fs);
    EXPECT_EQ(io::parse_formulas(text, spec), fs);
    for (const auto& f : fs) EXPECT_EQ(parse(spec, io::print_formula(spec, f)), f);
  }
}

TEST(ClauseFilterFile, RoundTrip) {
  auto spec = lockserv_spec();
  std::vector<Formula> clauses = {parse(spec, "forall N1:node, L1:lock. ~holds_lock(N1,L1) | ~grant_msg(N1,L1)"),
                                  parse(spec, "forall L1:lock. exists N1:node. server_holds_lock(L1) | holds_lock(N1,L1)")};
  auto text = io::export_clause_filter(spec, clauses);
  auto back = io::import_clause_filter(text, spec);
  std::sort(clauses.begin(), clauses.end());
  EXPECT_EQ(back, clauses);
  EXPECT_EQ(io::export_clause_filter(spec, back), text);
}

TEST(ClauseFilterFile, Empty) {
  auto spec = toy_spec();
  auto text = io::export_clause_filter(spec, {});
  EXPECT_TRUE(io::import_clause_filter(text, spec).empty());
}

TEST(ClauseFilterFile, Rejections) {
  auto spec = toy_spec();
  auto text = io::export_clause_filter(spec, {parse(spec, "forall X1:X. p(X1) | q(X1)")});
  auto other = spec;
  other.distinct = false;
  EXPECT_THROW(io::import_clause_filter(text, other), Error);
  // The header is mandatory here.
  EXPECT_THROW(io::import_clause_filter(text.substr(text.find('\n') + 1), spec), ParseError);
  auto wide = spec;
  wide.max_and = 2;
  wide.max_literal = 3;
  auto dnf = io::export_clause_filter(wide, {parse(wide, "forall X1:X. p(X1) | (q(X1) & r(X1))")});
  EXPECT_THROW(io::import_clause_filter(dnf, wide), ParseError);
}
