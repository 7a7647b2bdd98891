#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include "force/canonical.hpp"
#include "force/formula.hpp"
#include "force/pruning_store.hpp"
#include "force/search_spec.hpp"

namespace force {

// One cell of the search-space partition: exact number of existentials,
// exact used-variable count per sort and the sorted cube-size tuple.
struct SliceParams {
  int n_exists = 0;
  std::vector<int> t_vars;
  std::vector<int> t_lits;

  bool is_clause_slice() const {
    return std::all_of(t_lits.begin(), t_lits.end(), [](int n) { return n == 1; });
  }

  friend bool operator==(const SliceParams&, const SliceParams&) = default;
  friend auto operator<=>(const SliceParams&, const SliceParams&) = default;
};

inline SliceParams params_of(const Formula& f, int num_sorts) {
  return SliceParams{static_cast<int>(f.num_exists()), f.var_counts(num_sorts), f.cube_sizes()};
}

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max() : a + b;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = saturating_mul(r, n - k + i);
    if (r != std::numeric_limits<std::uint64_t>::max()) r /= i;
  }
  return r;
}

inline std::vector<Variable> slice_variables(const SliceParams& p) {
  std::vector<Variable> vars;
  for (std::size_t s = 0; s < p.t_vars.size(); ++s)
    for (int i = 0; i < p.t_vars[s]; ++i)
      vars.push_back(Variable{static_cast<std::uint8_t>(s), static_cast<std::uint8_t>(i)});
  return vars;
}

// Sorted non-decreasing tuples with entries in [1, max_and], length in
// [1, max_or] and sum at most max_literal.
inline void size_tuples(const SearchSpec& spec, std::vector<int>& cur, int min_entry, int sum,
                        std::vector<std::vector<int>>& out) {
  if (!cur.empty()) out.push_back(cur);
  if (static_cast<int>(cur.size()) == spec.max_or) return;
  for (int n = min_entry; n <= spec.max_and && sum + n <= spec.max_literal; ++n) {
    cur.push_back(n);
    size_tuples(spec, cur, n, sum + n, out);
    cur.pop_back();
  }
}

}  // namespace detail

// Cheap feasibility test: false only when the slice provably has no
// canonical formula.
inline bool slice_feasible(const SearchSpec& spec, const SliceParams& p) {
  if (static_cast<int>(p.t_vars.size()) != spec.num_sorts()) return false;
  for (std::size_t s = 0; s < p.t_vars.size(); ++s)
    if (p.t_vars[s] < 0 || p.t_vars[s] > spec.var_budget[s]) return false;
  auto vars = detail::slice_variables(p);
  if (vars.empty()) return false;
  if (p.n_exists < 0 || p.n_exists > spec.max_exists || p.n_exists > static_cast<int>(vars.size())) return false;
  if (p.t_lits.empty() || static_cast<int>(p.t_lits.size()) > spec.max_or) return false;
  if (!std::is_sorted(p.t_lits.begin(), p.t_lits.end())) return false;
  auto atoms = atoms_over(spec.signature, vars);
  if (atoms.empty()) return false;
  int total = 0;
  for (int n : p.t_lits) {
    if (n < 1 || n > spec.max_and || n > static_cast<int>(atoms.size())) return false;
    total += n;
  }
  if (total > spec.max_literal) return false;
  // Every variable must occur somewhere.
  int max_arity = 0;
  std::vector<bool> sort_covered(p.t_vars.size(), false);
  for (const auto& a : atoms) {
    max_arity = std::max<int>(max_arity, a.arity);
    for (std::size_t i = 0; i < a.arity; ++i) sort_covered[a.args[i].sort] = true;
  }
  for (std::size_t s = 0; s < p.t_vars.size(); ++s)
    if (p.t_vars[s] > 0 && !sort_covered[s]) return false;
  return total * max_arity >= static_cast<int>(vars.size());
}

// All feasible slice parameters of the spec in ascending order.
inline std::vector<SliceParams> enumerate_params(const SearchSpec& spec) {
  std::vector<std::vector<int>> tl;
  std::vector<int> cur;
  detail::size_tuples(spec, cur, 1, 0, tl);

  std::vector<std::vector<int>> tv{{}};
  for (int s = 0; s < spec.num_sorts(); ++s) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : tv)
      for (int n = 0; n <= spec.var_budget[s]; ++n) {
        auto t = prefix;
        t.push_back(n);
        next.push_back(std::move(t));
      }
    tv = std::move(next);
  }

  std::vector<SliceParams> out;
  for (int ne = 0; ne <= spec.max_exists; ++ne)
    for (const auto& v : tv)
      for (const auto& l : tl) {
        SliceParams p{ne, v, l};
        if (slice_feasible(spec, p)) out.push_back(std::move(p));
      }
  std::sort(out.begin(), out.end());
  return out;
}

// Generates the canonical formulas of one slice in ascending Formula order
// (quantifier pattern first, then the matrix lexicographically).
class SliceEnumerator {
 public:
  SliceEnumerator(const SearchSpec& spec, SliceParams params) : spec_(spec), params_(std::move(params)) {
    feasible_ = slice_feasible(spec_, params_);
    if (!feasible_) return;
    vars_ = detail::slice_variables(params_);
    lits_ = literals_over(spec_.signature, vars_);
    lit_vars_.reserve(lits_.size());
    for (const auto& l : lits_) {
      std::uint32_t m = 0;
      for (std::size_t i = 0; i < l.arity; ++i)
        for (std::size_t k = 0; k < vars_.size(); ++k)
          if (vars_[k] == l.args[i]) m |= 1u << k;
      lit_vars_.push_back(m);
    }
    for (const auto& r : spec_.signature.relations()) max_arity_ = std::max(max_arity_, r.arity());
  }

  const SliceParams& params() const { return params_; }

  // Product of per-cube literal choices times quantifier patterns; 0 when
  // the slice is infeasible.
  std::uint64_t upper_bound() const {
    if (!feasible_) return 0;
    std::uint64_t b = detail::binomial(vars_.size(), static_cast<std::uint64_t>(params_.n_exists));
    for (int n : params_.t_lits) b = detail::saturating_mul(b, detail::binomial(lits_.size(), static_cast<std::uint64_t>(n)));
    return b;
  }

  // Calls fn(const Formula&) for each canonical formula; stops early when fn
  // returns false.
  template <class Fn>
  void for_each(Fn&& fn) const {
    if (!feasible_) return;
    std::vector<Matrix> matrices;
    Matrix cur;
    build_matrices(0, 0, cur, matrices);
    if (matrices.empty()) return;

    const std::size_t nv = vars_.size();
    Formula f;
    f.distinct = spec_.distinct;
    f.prefix.resize(nv);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nv); ++mask) {
      if (std::popcount(mask) != params_.n_exists) continue;
      for (std::size_t k = 0; k < nv; ++k) {
        f.prefix[k].var = vars_[k];
        f.prefix[k].quantifier = (mask >> (nv - 1 - k)) & 1 ? Quantifier::kExists : Quantifier::kForall;
      }
      auto runs = detail::interchangeable_runs(f.prefix);
      for (const auto& m : matrices) {
        bool ok = true;
        for (auto [b, e] : runs) {
          for (std::size_t i = b; i + 1 < e && ok; ++i) ok = m.minrel[i] <= m.minrel[i + 1];
          if (!ok) break;
        }
        if (!ok) continue;
        f.matrix.clear();
        for (const auto& cube : m.cubes) {
          Cube c;
          c.reserve(cube.size());
          for (int li : cube) c.push_back(lits_[static_cast<std::size_t>(li)]);
          f.matrix.push_back(std::move(c));
        }
        if (!fn(static_cast<const Formula&>(f))) return;
      }
    }
  }

  std::vector<Formula> collect() const {
    std::vector<Formula> out;
    for_each([&](const Formula& f) {
      out.push_back(f);
      return true;
    });
    return out;
  }

 private:
  struct Matrix {
    std::vector<std::vector<int>> cubes;
    std::vector<int> minrel;
  };

  bool same_atom(int a, int b) const { return a / 2 == b / 2; }

  void build_matrices(std::size_t cube, std::uint32_t covered, Matrix& cur, std::vector<Matrix>& out) const {
    const auto& sizes = params_.t_lits;
    const std::uint32_t all = vars_.size() == 32 ? ~0u : ((1u << vars_.size()) - 1);
    if (cube == sizes.size()) {
      if (covered != all) return;
      // Singleton cubes lead the matrix; {l} with {~l} is a tautology.
      for (std::size_t i = 0; i < cur.cubes.size() && cur.cubes[i].size() == 1; ++i)
        for (std::size_t j = i + 1; j < cur.cubes.size() && cur.cubes[j].size() == 1; ++j)
          if (same_atom(cur.cubes[i][0], cur.cubes[j][0])) return;
      // A longer cube may not hold the negation of a singleton cube.
      for (std::size_t i = 0; i < cur.cubes.size() && cur.cubes[i].size() == 1; ++i)
        for (const auto& c : cur.cubes)
          if (c.size() > 1 && std::binary_search(c.begin(), c.end(), cur.cubes[i][0] ^ 1)) return;
      Matrix m = cur;
      m.minrel.assign(vars_.size(), std::numeric_limits<int>::max());
      for (const auto& c : m.cubes)
        for (int li : c)
          for (std::size_t k = 0; k < vars_.size(); ++k)
            if (lit_vars_[li] >> k & 1u) m.minrel[k] = std::min<int>(m.minrel[k], lits_[li].rel);
      out.push_back(std::move(m));
      return;
    }
    int remaining = 0;
    for (std::size_t j = cube; j < sizes.size(); ++j) remaining += sizes[j];
    if (std::popcount(all & ~covered) > remaining * max_arity_) return;

    int first_min = 0;
    if (cube > 0 && sizes[cube - 1] == sizes[cube]) first_min = cur.cubes[cube - 1][0] + 1;
    std::vector<int> pick;
    choose(cube, first_min, static_cast<std::size_t>(sizes[cube]), pick, covered, cur, out);
  }

  void choose(std::size_t cube, int from, std::size_t size, std::vector<int>& pick, std::uint32_t covered, Matrix& cur,
              std::vector<Matrix>& out) const {
    if (pick.size() == size) {
      for (const auto& earlier : cur.cubes)
        if (earlier.size() < size && std::includes(pick.begin(), pick.end(), earlier.begin(), earlier.end())) return;
      std::uint32_t cov = covered;
      for (int li : pick) cov |= lit_vars_[li];
      cur.cubes.push_back(pick);
      build_matrices(cube + 1, cov, cur, out);
      cur.cubes.pop_back();
      return;
    }
    const int n = static_cast<int>(lits_.size());
    const int need = static_cast<int>(size - pick.size());
    for (int li = from; li + need <= n; ++li) {
      if (!pick.empty() && same_atom(pick.back(), li)) continue;
      pick.push_back(li);
      choose(cube, li + 1, size, pick, covered, cur, out);
      pick.pop_back();
    }
  }

  const SearchSpec& spec_;
  SliceParams params_;
  bool feasible_ = false;
  std::vector<Variable> vars_;
  std::vector<Literal> lits_;
  std::vector<std::uint32_t> lit_vars_;
  int max_arity_ = 1;
};

// Canonical formulas of the slice not entailed by any stored formula.
inline std::vector<Formula> enumerate_slice(const SearchSpec& spec, const SliceParams& params,
                                            const PruningStore& blocked) {
  std::vector<Formula> out;
  SliceEnumerator(spec, params).for_each([&](const Formula& f) {
    if (!blocked.blocks(f)) out.push_back(f);
    return true;
  });
  return out;
}

inline std::uint64_t slice_size_upper_bound(const SearchSpec& spec, const SliceParams& params) {
  return SliceEnumerator(spec, params).upper_bound();
}

// Size of the unpruned space: every quantifier pattern over the full
// variable budget (at most max-exists existentials) times every ordered
// sequence of cubes drawn from the literals over those variables.
inline std::uint64_t raw_candidate_count(const SearchSpec& spec) {
  auto vars = all_variables(spec);
  const std::uint64_t n_lits = literals_over(spec.signature, vars).size();
  std::uint64_t patterns = 0;
  for (int e = 0; e <= std::min<int>(spec.max_exists, static_cast<int>(vars.size())); ++e)
    patterns = detail::saturating_add(patterns, detail::binomial(vars.size(), static_cast<std::uint64_t>(e)));
  // ways[k][t]: ordered sequences of k cubes using t literals in total.
  std::vector<std::vector<std::uint64_t>> ways(static_cast<std::size_t>(spec.max_or) + 1,
                                               std::vector<std::uint64_t>(static_cast<std::size_t>(spec.max_literal) + 1, 0));
  ways[0][0] = 1;
  std::uint64_t matrices = 0;
  for (int k = 1; k <= spec.max_or; ++k)
    for (int t = 1; t <= spec.max_literal; ++t) {
      for (int s = 1; s <= std::min(spec.max_and, t); ++s)
        ways[k][t] = detail::saturating_add(ways[k][t], detail::saturating_mul(ways[k - 1][t - s], detail::binomial(n_lits, s)));
      matrices = detail::saturating_add(matrices, ways[k][t]);
    }
  return detail::saturating_mul(patterns, matrices);
}

}  // namespace force
