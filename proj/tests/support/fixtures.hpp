#pragma once

#include <array>
#include <random>
#include <string_view>
#include <vector>

#include "force/force.hpp"
#include "support/micro.hpp"

namespace fixtures {

using force::Formula;
using force::SearchSpec;
using force::Structure;

// M1: p = {x0, x1}, q = {x1, x2}, r = {}
// M2: p = {x0, x1}, q = {x2},     r = {x1}
inline std::vector<Structure> toy_models(const SearchSpec& spec) {
  Structure m1(spec.signature, {3}), m2(spec.signature, {3});
  for (int x : {0, 1}) {
    m1.set(0, std::array{x});
    m2.set(0, std::array{x});
  }
  for (int x : {1, 2}) m1.set(1, std::array{x});
  m2.set(1, std::array{2});
  m2.set(2, std::array{1});
  return {m1, m2};
}

inline Formula parse(const SearchSpec& spec, std::string_view text) { return force::io::parse_formula(text, spec); }

// Random closed formula within the spec's shape budgets; not canonical.
inline Formula random_raw(const SearchSpec& spec, std::mt19937_64& rng) {
  Formula f;
  f.distinct = spec.distinct;
  int exists_left = spec.max_exists;
  for (int s = 0; s < spec.num_sorts(); ++s) {
    int count = micro::uniform(rng, 0, spec.var_budget[s]);
    for (int i = 0; i < count; ++i) {
      bool ex = exists_left > 0 && force::pick_below(rng, 3) == 0;
      exists_left -= ex;
      f.prefix.push_back({force::Variable{static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(i)},
                          ex ? force::Quantifier::kExists : force::Quantifier::kForall});
    }
  }
  std::vector<force::Variable> vars;
  for (const auto& b : f.prefix) vars.push_back(b.var);
  auto lits = force::literals_over(spec.signature, vars);
  if (lits.empty()) return f;
  int budget = spec.max_literal;
  int cubes = micro::uniform(rng, 1, spec.max_or);
  for (int c = 0; c < cubes && budget > 0; ++c) {
    int size = micro::uniform(rng, 1, std::min(spec.max_and, budget));
    budget -= size;
    force::Cube cube;
    for (int k = 0; k < size; ++k) cube.push_back(lits[force::pick_below(rng, lits.size())]);
    f.matrix.push_back(std::move(cube));
  }
  return f;
}

// Random canonical formula, drawn by normalizing raw formulas.
inline Formula random_canonical(const SearchSpec& spec, std::mt19937_64& rng) {
  for (;;) {
    Formula raw = random_raw(spec, rng);
    if (raw.matrix.empty()) continue;
    auto n = force::normalize(spec, raw);
    if (n.status == force::NormalForm::kCanonical && force::is_canonical(spec, n.formula)) return n.formula;
  }
}

// Structures with per-sort sizes budget..budget+1, through the reference
// evaluator's enumeration.
inline std::vector<Structure> bounded_structures(const SearchSpec& spec) {
  std::vector<int> lo = spec.var_budget, hi = spec.var_budget;
  for (auto& n : hi) ++n;
  std::vector<Structure> out;
  naive::for_each_structure(spec.signature, lo, hi, [&](const Structure& m) { out.push_back(m); });
  return out;
}

inline bool naive_entails(const Formula& f, const Formula& g, const std::vector<Structure>& ms) {
  for (const auto& m : ms)
    if (naive::evaluate(f, m) && !naive::evaluate(g, m)) return false;
  return true;
}

}  // namespace fixtures
