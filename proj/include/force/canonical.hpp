#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "force/error.hpp"
#include "force/formula.hpp"
#include "force/search_spec.hpp"

namespace force {

// Syntactic tautology rules: an empty cube, or two singleton cubes {l} and
// {~l}. Sound but incomplete: `(p & q) | ~p | ~q` is valid yet not flagged.
inline bool is_tautology(const Formula& f) {
  for (const auto& c : f.matrix)
    if (c.empty()) return true;
  for (std::size_t i = 0; i < f.matrix.size(); ++i) {
    if (f.matrix[i].size() != 1) continue;
    for (std::size_t j = i + 1; j < f.matrix.size(); ++j) {
      if (f.matrix[j].size() != 1) continue;
      const auto& a = f.matrix[i][0];
      const auto& b = f.matrix[j][0];
      if (a.same_atom(b) && a.negated != b.negated) return true;
    }
  }
  return false;
}

namespace detail {

inline void check_variable(const SearchSpec& spec, Variable v) {
  if (v.sort >= spec.num_sorts()) throw SignatureError("variable of unknown sort");
  if (v.idx >= spec.var_budget[v.sort])
    throw SignatureError("variable " + std::to_string(v.idx + 1) + " of sort '" +
                         spec.signature.sort(v.sort).name + "' exceeds the variable budget");
}

inline void check_well_formed(const SearchSpec& spec, const Formula& f) {
  if (f.distinct != spec.distinct) throw SignatureError("formula and spec disagree on distinct semantics");
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    check_variable(spec, f.prefix[i].var);
    for (std::size_t j = 0; j < i; ++j)
      if (f.prefix[j].var == f.prefix[i].var) throw SignatureError("variable bound twice in prefix");
  }
  for (const auto& c : f.matrix) {
    for (const auto& l : c) {
      if (l.rel >= spec.signature.num_relations()) throw SignatureError("literal over unknown relation");
      const auto& rel = spec.signature.relation(l.rel);
      if (rel.arity() != l.arity) throw SignatureError("arity mismatch in literal over '" + rel.name + "'");
      for (std::size_t i = 0; i < l.arity; ++i) {
        check_variable(spec, l.args[i]);
        if (l.args[i].sort != rel.arg_sorts[i])
          throw SignatureError("argument " + std::to_string(i + 1) + " of '" + rel.name + "' has the wrong sort");
      }
    }
  }
}

// Sorts each cube, drops duplicate literals; false if some cube holds l and ~l.
inline bool normalize_cubes(std::vector<Cube>& matrix) {
  bool consistent = true;
  for (auto& c : matrix) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i].same_atom(c[i + 1])) consistent = false;
  }
  return consistent;
}

inline bool is_subset(const Cube& small, const Cube& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Removes duplicate cubes and cubes that contain another cube, keeping the
// relative order of the survivors. Cubes must be sorted.
inline void drop_redundant_cubes(std::vector<Cube>& matrix) {
  std::vector<Cube> kept;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < matrix.size() && !redundant; ++j) {
      if (i == j) continue;
      if (matrix[j] == matrix[i]) {
        redundant = j < i;
      } else if (is_subset(matrix[j], matrix[i])) {
        redundant = true;
      }
    }
    if (!redundant) kept.push_back(matrix[i]);
  }
  matrix = std::move(kept);
}

// A cube of two or more literals containing ~l next to a singleton cube {l}
// can lose ~l without changing meaning: l | (~l & c) is l | c.
inline bool has_resolvable_cube(const std::vector<Cube>& matrix) {
  for (const auto& unit : matrix) {
    if (unit.size() != 1) continue;
    const Literal neg = negate(unit[0]);
    for (const auto& c : matrix)
      if (c.size() > 1 && std::binary_search(c.begin(), c.end(), neg)) return true;
  }
  return false;
}

// Applies the rewrite above once for every singleton cube; true if anything
// changed. Cubes must be sorted.
inline bool strip_resolved(std::vector<Cube>& matrix) {
  bool changed = false;
  for (std::size_t u = 0; u < matrix.size(); ++u) {
    if (matrix[u].size() != 1) continue;
    const Literal neg = negate(matrix[u][0]);
    for (auto& c : matrix) {
      if (c.size() < 2) continue;
      auto it = std::lower_bound(c.begin(), c.end(), neg);
      if (it != c.end() && *it == neg) {
        c.erase(it);
        changed = true;
      }
    }
  }
  return changed;
}

// Size non-decreasing; equal sizes need strictly increasing minimal literals.
inline bool cube_order_ok(const std::vector<Cube>& matrix) {
  for (std::size_t i = 0; i + 1 < matrix.size(); ++i) {
    const auto& a = matrix[i];
    const auto& b = matrix[i + 1];
    if (a.size() > b.size()) return false;
    if (a.size() == b.size() && !(a.front() < b.front())) return false;
  }
  return true;
}

// Smallest relation index in which each prefix variable occurs.
inline std::vector<int> min_relation(const Formula& f) {
  std::vector<int> out(f.prefix.size(), std::numeric_limits<int>::max());
  for (const auto& c : f.matrix)
    for (const auto& l : c)
      for (std::size_t i = 0; i < l.arity; ++i) {
        auto pos = f.position_of(l.args[i]);
        if (pos >= 0) out[pos] = std::min<int>(out[pos], l.rel);
      }
  return out;
}

// Maximal runs [begin, end) of prefix positions sharing sort and quantifier.
// Permuting variables inside a run is an exact symmetry of the formula.
inline std::vector<std::pair<std::size_t, std::size_t>> interchangeable_runs(const std::vector<Binding>& prefix) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= prefix.size(); ++i) {
    if (i == prefix.size() || prefix[i].var.sort != prefix[begin].var.sort ||
        prefix[i].quantifier != prefix[begin].quantifier) {
      runs.emplace_back(begin, i);
      begin = i;
    }
  }
  return runs;
}

// Within each interchangeable run, earlier variables must first occur in a
// relation no later than the following ones.
inline bool symmetry_order_ok(const Formula& f) {
  auto minrel = min_relation(f);
  for (auto [b, e] : interchangeable_runs(f.prefix))
    for (std::size_t i = b; i + 1 < e; ++i)
      if (minrel[i] > minrel[i + 1]) return false;
  return true;
}

inline bool within_budgets(const SearchSpec& spec, const Formula& f) {
  if (f.matrix.empty() || static_cast<int>(f.matrix.size()) > spec.max_or) return false;
  if (static_cast<int>(f.num_literals()) > spec.max_literal) return false;
  if (static_cast<int>(f.num_exists()) > spec.max_exists) return false;
  for (const auto& c : f.matrix)
    if (static_cast<int>(c.size()) > spec.max_and) return false;
  return true;
}

inline void rename(Formula& f, const std::vector<std::pair<Variable, Variable>>& mapping) {
  auto map = [&](Variable v) {
    for (const auto& [from, to] : mapping)
      if (from == v) return to;
    return v;
  };
  for (auto& b : f.prefix) b.var = map(b.var);
  for (auto& c : f.matrix)
    for (auto& l : c)
      for (std::size_t i = 0; i < l.arity; ++i) l.args[i] = map(l.args[i]);
}

}  // namespace detail

// Returns the canonical form of `raw` or nullopt when the input is not the
// representative the enumeration would produce: a symmetric variant, an
// unused or unbound variable, a contradictory cube, a tautology, a cube that
// repeats the negation of a singleton cube, or a shape outside the budgets. Literal and cube duplicates, and cubes that
// contain another cube, are removed first. Throws SignatureError for
// malformed input.
inline std::optional<Formula> canonicalize(const SearchSpec& spec, Formula raw) {
  detail::check_well_formed(spec, raw);
  if (!detail::normalize_cubes(raw.matrix)) return std::nullopt;
  if (is_tautology(raw)) return std::nullopt;
  detail::drop_redundant_cubes(raw.matrix);
  if (detail::has_resolvable_cube(raw.matrix)) return std::nullopt;
  if (!detail::cube_order_ok(raw.matrix)) return std::nullopt;

  for (std::size_t i = 0; i + 1 < raw.prefix.size(); ++i)
    if (!(raw.prefix[i].var < raw.prefix[i + 1].var)) return std::nullopt;
  for (const auto& c : raw.matrix)
    for (const auto& l : c)
      for (std::size_t i = 0; i < l.arity; ++i)
        if (raw.position_of(l.args[i]) < 0) return std::nullopt;
  std::vector<int> next_idx(static_cast<std::size_t>(spec.num_sorts()), 0);
  for (const auto& b : raw.prefix) {
    if (!raw.mentions(b.var)) return std::nullopt;
    if (b.var.idx != next_idx[b.var.sort]++) return std::nullopt;
  }
  if (!detail::within_budgets(spec, raw)) return std::nullopt;
  if (!detail::symmetry_order_ok(raw)) return std::nullopt;
  return raw;
}

inline bool is_canonical(const SearchSpec& spec, const Formula& f) {
  auto c = canonicalize(spec, f);
  return c && *c == f;
}

enum class NormalForm { kCanonical, kTautology, kContradiction, kUnrepresentable };

struct Normalized {
  NormalForm status = NormalForm::kUnrepresentable;
  Formula formula;
};

// Rewrites a closed formula into the equivalent canonical representative:
// contradictory cubes and redundant cubes are dropped, unused variables are
// removed where that preserves meaning, variables are renamed to the lowest
// ordinals, interchangeable variables are reordered and cubes sorted.
//
// Under distinct semantics an unused variable can only be dropped when no
// later prefix variable shares its sort; otherwise (and for prefixes that are
// not grouped by sort, or shapes outside the budgets) the result is
// kUnrepresentable.
inline Normalized normalize(const SearchSpec& spec, Formula f) {
  detail::check_well_formed(spec, f);
  for (const auto& c : f.matrix)
    for (const auto& l : c)
      for (std::size_t i = 0; i < l.arity; ++i)
        if (f.position_of(l.args[i]) < 0) throw SignatureError("unbound variable");

  detail::normalize_cubes(f.matrix);
  std::erase_if(f.matrix, [](const Cube& c) {
    for (std::size_t i = 0; i + 1 < c.size(); ++i)
      if (c[i].same_atom(c[i + 1])) return true;
    return false;
  });
  if (f.matrix.empty()) return {NormalForm::kContradiction, f};
  if (is_tautology(f)) return {NormalForm::kTautology, f};
  detail::drop_redundant_cubes(f.matrix);
  while (detail::strip_resolved(f.matrix)) {
    if (is_tautology(f)) return {NormalForm::kTautology, f};
    detail::drop_redundant_cubes(f.matrix);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = f.prefix.size(); i-- > 0;) {
      if (f.mentions(f.prefix[i].var)) continue;
      bool last_of_sort = true;
      for (std::size_t j = i + 1; j < f.prefix.size(); ++j)
        if (f.prefix[j].var.sort == f.prefix[i].var.sort) last_of_sort = false;
      if (!f.distinct || last_of_sort) {
        f.prefix.erase(f.prefix.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
  for (const auto& b : f.prefix)
    if (!f.mentions(b.var)) return {NormalForm::kUnrepresentable, f};
  for (std::size_t i = 0; i + 1 < f.prefix.size(); ++i)
    if (f.prefix[i].var.sort > f.prefix[i + 1].var.sort) return {NormalForm::kUnrepresentable, f};

  // Lowest ordinals in prefix order; the temporary sort tag avoids clashes.
  {
    std::vector<std::pair<Variable, Variable>> to_tmp, from_tmp;
    std::vector<int> next(static_cast<std::size_t>(spec.num_sorts()), 0);
    for (const auto& b : f.prefix) {
      Variable tmp{static_cast<std::uint8_t>(b.var.sort + 128), static_cast<std::uint8_t>(next[b.var.sort])};
      to_tmp.emplace_back(b.var, tmp);
      from_tmp.emplace_back(tmp, Variable{b.var.sort, static_cast<std::uint8_t>(next[b.var.sort]++)});
    }
    detail::rename(f, to_tmp);
    detail::rename(f, from_tmp);
  }

  // Order interchangeable variables by their first relation.
  {
    auto minrel = detail::min_relation(f);
    std::vector<std::pair<Variable, Variable>> to_tmp, from_tmp;
    for (auto [b, e] : detail::interchangeable_runs(f.prefix)) {
      std::vector<std::size_t> order(e - b);
      for (std::size_t k = 0; k < order.size(); ++k) order[k] = b + k;
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t x, std::size_t y) { return minrel[x] < minrel[y]; });
      for (std::size_t k = 0; k < order.size(); ++k) {
        Variable old_var = f.prefix[order[k]].var;
        Variable new_var = f.prefix[b + k].var;
        Variable tmp{static_cast<std::uint8_t>(old_var.sort + 128), old_var.idx};
        to_tmp.emplace_back(old_var, tmp);
        from_tmp.emplace_back(tmp, new_var);
      }
    }
    // Prefix slots keep their variables; only matrix occurrences move.
    auto prefix = f.prefix;
    detail::rename(f, to_tmp);
    detail::rename(f, from_tmp);
    f.prefix = prefix;
  }

  detail::normalize_cubes(f.matrix);
  std::sort(f.matrix.begin(), f.matrix.end(), [](const Cube& a, const Cube& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  if (!detail::cube_order_ok(f.matrix)) return {NormalForm::kUnrepresentable, f};
  if (!detail::within_budgets(spec, f)) return {NormalForm::kUnrepresentable, f};
  for (const auto& b : f.prefix)
    if (b.var.idx >= spec.var_budget[b.var.sort]) return {NormalForm::kUnrepresentable, f};
  return {NormalForm::kCanonical, f};
}

}  // namespace force
