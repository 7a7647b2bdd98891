#pragma once

#include <algorithm>
#include <unordered_set>
#include <vector>

#include "force/canonical.hpp"
#include "force/entailment.hpp"
#include "force/error.hpp"
#include "force/search_space.hpp"

namespace force {

// Cube-size tuple `from` can be turned into `to` by deleting literals and
// adding cubes: some injection maps each cube of `from` onto a cube of `to`
// that is no larger. Both tuples are sorted ascending, so matching the
// smallest entries pairwise decides it.
inline bool cube_sizes_weaken(const std::vector<int>& from, const std::vector<int>& to) {
  if (from.size() > to.size()) return false;
  for (std::size_t k = 0; k < from.size(); ++k)
    if (from[k] < to[k]) return false;
  return true;
}

// Strict slice precedence: formulas of `a` are at least as strong as those of
// `b` (fewer existentials, fewer variables, larger or fewer cubes).
inline bool precedes(const SliceParams& a, const SliceParams& b) {
  if (a == b) return false;
  if (a.n_exists > b.n_exists) return false;
  if (a.t_vars.size() != b.t_vars.size()) return false;
  for (std::size_t s = 0; s < a.t_vars.size(); ++s)
    if (a.t_vars[s] > b.t_vars[s]) return false;
  return cube_sizes_weaken(a.t_lits, b.t_lits);
}

struct DnfSplit {
  std::vector<SliceParams> clause_space;
  std::vector<SliceParams> dnf_space;
};

inline DnfSplit split_dnf(const std::vector<SliceParams>& slices) {
  DnfSplit split;
  for (const auto& p : slices) (p.is_clause_slice() ? split.clause_space : split.dnf_space).push_back(p);
  return split;
}

inline DnfSplit split_dnf(const SearchSpec& spec) { return split_dnf(enumerate_params(spec)); }

// Topological levels of the slice order: every slice sits one level after the
// deepest slice preceding it, so slices sharing a level are incomparable.
// Levels list their slices in ascending parameter order.
inline std::vector<std::vector<SliceParams>> split_tem(std::vector<SliceParams> slices) {
  std::sort(slices.begin(), slices.end());
  slices.erase(std::unique(slices.begin(), slices.end()), slices.end());
  const std::size_t n = slices.size();
  std::vector<std::vector<std::size_t>> succ(n);
  std::vector<int> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (precedes(slices[i], slices[j])) {
        succ[i].push_back(j);
        ++indegree[j];
      }
  std::vector<int> level(n, 0);
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  std::size_t visited = 0;
  while (!ready.empty()) {
    std::size_t i = ready.back();
    ready.pop_back();
    ++visited;
    for (auto j : succ[i]) {
      level[j] = std::max(level[j], level[i] + 1);
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  if (visited != n) throw Error("slice order contains a cycle");
  int depth = n == 0 ? 0 : *std::max_element(level.begin(), level.end()) + 1;
  std::vector<std::vector<SliceParams>> levels(static_cast<std::size_t>(depth));
  for (std::size_t i = 0; i < n; ++i) levels[level[i]].push_back(slices[i]);
  return levels;
}

// Admission test for DNF candidates built from satisfied clauses: a candidate
// passes iff every clause obtained by picking one literal from each cube is
// known to hold. Picks that reduce to a tautology pass; so do picks whose
// leftover variables cannot be dropped without changing meaning, since no
// clause of the space expresses them.
class ClauseFilter {
 public:
  // `closed` declares that `clauses` contains every satisfied clause of the
  // clause space, in which case membership decides each pick. Otherwise
  // picks are matched by entailment against the clauses.
  ClauseFilter(const SearchSpec& spec, std::vector<Formula> clauses, bool closed = false)
      : spec_(spec), closed_(closed) {
    for (auto& c : clauses) {
      summaries_.emplace_back(c);
      members_.insert(c);
      clauses_.push_back(std::move(c));
    }
  }

  std::size_t size() const { return clauses_.size(); }

  bool admits(const Formula& candidate) const {
    const auto& cubes = candidate.matrix;
    if (cubes.empty()) return false;
    std::vector<std::size_t> pick(cubes.size(), 0);
    Formula derived;
    derived.prefix = candidate.prefix;
    derived.distinct = candidate.distinct;
    for (;;) {
      derived.matrix.clear();
      for (std::size_t i = 0; i < cubes.size(); ++i) derived.matrix.push_back(Cube{cubes[i][pick[i]]});
      if (!known(derived)) return false;
      std::size_t k = cubes.size();
      while (k > 0 && ++pick[k - 1] == cubes[k - 1].size()) {
        pick[k - 1] = 0;
        --k;
      }
      if (k == 0) return true;
    }
  }

  bool operator()(const Formula& candidate) const { return admits(candidate); }

 private:
  bool known(const Formula& derived) const {
    auto n = normalize(spec_, derived);
    if (n.status == NormalForm::kTautology || n.status == NormalForm::kUnrepresentable) return true;
    if (n.status == NormalForm::kContradiction) return false;
    if (members_.count(n.formula)) return true;
    if (closed_) return false;
    EntailmentSummary ns(n.formula);
    for (std::size_t i = 0; i < clauses_.size(); ++i)
      if (entails_syntactic(clauses_[i], summaries_[i], n.formula, ns)) return true;
    return false;
  }

  const SearchSpec& spec_;
  bool closed_;
  std::vector<Formula> clauses_;
  std::vector<EntailmentSummary> summaries_;
  std::unordered_set<Formula, FormulaHash> members_;
};

inline ClauseFilter build_from_clauses(const SearchSpec& spec, std::vector<Formula> clauses, bool closed = false) {
  return ClauseFilter(spec, std::move(clauses), closed);
}

}  // namespace force
