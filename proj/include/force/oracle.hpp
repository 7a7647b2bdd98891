#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "force/canonical.hpp"
#include "force/error.hpp"
#include "force/evaluate.hpp"
#include "force/search_spec.hpp"
#include "force/structure.hpp"

namespace force {

// Every structure whose universe size for sort s lies in [lo[s], hi[s]].
// Throws GuardExceeded when one size vector needs more than `max_bits`
// relation-table bits.
inline std::vector<Structure> all_structures(const Signature& sig, const std::vector<int>& lo,
                                             const std::vector<int>& hi, std::size_t max_bits = 16) {
  std::vector<Structure> out;
  std::vector<int> size = lo;
  for (std::size_t s = 0; s < size.size(); ++s)
    if (size[s] < 1 || hi[s] < size[s]) return out;
  for (;;) {
    Structure base(sig, size);
    std::size_t bits = 0;
    for (int r = 0; r < sig.num_relations(); ++r) bits += base.table_size(r);
    if (bits > max_bits)
      throw GuardExceeded("bounded structure enumeration needs " + std::to_string(bits) + " bits per structure");
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
      Structure m = base;
      std::size_t b = 0;
      for (int r = 0; r < sig.num_relations(); ++r)
        for (std::size_t i = 0; i < m.table_size(r); ++i, ++b) m.set_at(r, i, (code >> b) & 1);
      out.push_back(std::move(m));
    }
    std::size_t s = 0;
    while (s < size.size() && ++size[s] > hi[s]) size[s] = lo[s], ++s;
    if (s == size.size()) break;
  }
  return out;
}

// Truth vectors over a fixed finite set of structures: f entails g on the
// set iff bits(f) is a subset of bits(g).
class BoundedSemantics {
 public:
  using Bits = std::vector<std::uint64_t>;

  BoundedSemantics(const Signature& sig, std::vector<Structure> structures)
      : sig_(sig), structures_(std::move(structures)) {}

  // Per-sort sizes from the variable budget up to budget + extra.
  static BoundedSemantics for_spec(const SearchSpec& spec, int extra = 1, std::size_t max_bits = 16) {
    std::vector<int> lo = spec.var_budget, hi = spec.var_budget;
    for (auto& n : lo) n = std::max(n, 1);
    for (std::size_t s = 0; s < hi.size(); ++s) hi[s] = lo[s] + extra;
    return BoundedSemantics(spec.signature, all_structures(spec.signature, lo, hi, max_bits));
  }

  const std::vector<Structure>& structures() const { return structures_; }

  Bits truth(const Formula& f) const {
    Bits bits((structures_.size() + 63) / 64, 0);
    Evaluator ev(sig_, f);
    for (std::size_t i = 0; i < structures_.size(); ++i)
      if (ev(structures_[i])) bits[i / 64] |= std::uint64_t{1} << (i % 64);
    return bits;
  }

  Bits all_true() const {
    Bits bits((structures_.size() + 63) / 64, ~std::uint64_t{0});
    if (structures_.size() % 64) bits.back() = (std::uint64_t{1} << (structures_.size() % 64)) - 1;
    return bits;
  }

  static bool subset(const Bits& a, const Bits& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] & ~b[i]) return false;
    return true;
  }

  bool entails(const Formula& f, const Formula& g) const { return subset(truth(f), truth(g)); }

  Bits conjunction(std::span<const Formula> fs) const {
    Bits acc = all_true();
    for (const auto& f : fs) {
      auto t = truth(f);
      for (std::size_t i = 0; i < acc.size(); ++i) acc[i] &= t[i];
    }
    return acc;
  }

 private:
  const Signature& sig_;
  std::vector<Structure> structures_;
};

struct OracleOptions {
  std::uint64_t max_raw = 2'000'000;  // raw candidate guard
  int universe_extra = 1;             // sizes budget..budget+extra
  std::size_t max_bits = 16;          // structure-enumeration guard
};

struct OracleResult {
  std::vector<Formula> formulas;  // entailment-maximal satisfied formulas
  std::uint64_t raw_count = 0;    // candidates before canonicalization
  std::size_t canonical_count = 0;
  std::size_t satisfied_count = 0;
};

namespace detail {

// Drops prefix variables the matrix never mentions.
inline Formula project_used(Formula f) {
  std::erase_if(f.prefix, [&](const Binding& b) { return !f.mentions(b.var); });
  return f;
}

// Calls fn(raw) for every quantifier pattern over the full variable budget
// with at most max-exists existentials, combined with every ordered sequence
// of cubes (each a set of 1..max-and literals) within the literal budget.
template <class Fn>
std::uint64_t for_each_raw(const SearchSpec& spec, std::uint64_t max_raw, Fn&& fn) {
  const auto vars = all_variables(spec);
  const auto lits = literals_over(spec.signature, vars);
  std::vector<Cube> cubes;
  for (int size = 1; size <= spec.max_and; ++size) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    auto rec = [&](auto& self, int pos, int from) -> void {
      if (pos == size) {
        Cube c;
        for (int i : pick) c.push_back(lits[static_cast<std::size_t>(i)]);
        cubes.push_back(std::move(c));
        return;
      }
      for (int i = from; i < static_cast<int>(lits.size()); ++i) {
        pick[static_cast<std::size_t>(pos)] = i;
        self(self, pos + 1, i + 1);
      }
    };
    rec(rec, 0, 0);
  }

  std::uint64_t count = 0;
  Formula f;
  f.distinct = spec.distinct;
  const std::size_t nv = vars.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nv); ++mask) {
    if (std::popcount(mask) > spec.max_exists) continue;
    f.prefix.clear();
    for (std::size_t k = 0; k < nv; ++k)
      f.prefix.push_back({vars[k], (mask >> k) & 1 ? Quantifier::kExists : Quantifier::kForall});
    f.matrix.clear();
    auto rec = [&](auto& self, int literals) -> void {
      if (!f.matrix.empty()) {
        if (++count > max_raw) throw GuardExceeded("more than " + std::to_string(max_raw) + " raw candidates");
        fn(static_cast<const Formula&>(f));
      }
      if (static_cast<int>(f.matrix.size()) == spec.max_or) return;
      for (const auto& c : cubes) {
        if (literals + static_cast<int>(c.size()) > spec.max_literal) continue;
        f.matrix.push_back(c);
        self(self, literals + static_cast<int>(c.size()));
        f.matrix.pop_back();
      }
    };
    rec(rec, 0);
  }
  return count;
}

}  // namespace detail

// The canonical search space, obtained without slicing: every raw candidate
// is projected onto the variables it uses and kept when canonicalization
// accepts it. Sorted.
inline std::vector<Formula> canonical_space(const SearchSpec& spec, std::uint64_t max_raw = 2'000'000,
                                            std::uint64_t* raw_count = nullptr) {
  spec.validate();
  std::unordered_set<Formula, FormulaHash> seen;
  auto n = detail::for_each_raw(spec, max_raw, [&](const Formula& raw) {
    if (auto c = canonicalize(spec, detail::project_used(raw))) seen.insert(std::move(*c));
  });
  if (raw_count) *raw_count = n;
  std::vector<Formula> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

// The target set computed directly: satisfied canonical formulas minus
// tautologies, reduced to the semantically maximal ones over the bounded
// structures; the canonically least member of each equivalence class is kept.
inline OracleResult brute_force_oracle(const SearchSpec& spec, std::span<const Structure> sigma,
                                       const OracleOptions& options = {}) {
  OracleResult result;
  auto space = canonical_space(spec, options.max_raw, &result.raw_count);
  result.canonical_count = space.size();
  std::vector<Formula> sat;
  for (auto& f : space)
    if (!is_tautology(f) && satisfies_all(spec.signature, f, sigma)) sat.push_back(std::move(f));
  result.satisfied_count = sat.size();

  auto sem = BoundedSemantics::for_spec(spec, options.universe_extra, options.max_bits);
  std::vector<BoundedSemantics::Bits> tv;
  tv.reserve(sat.size());
  for (const auto& f : sat) tv.push_back(sem.truth(f));
  for (std::size_t i = 0; i < sat.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < sat.size() && !redundant; ++j) {
      if (i == j || !BoundedSemantics::subset(tv[j], tv[i])) continue;
      redundant = j < i || !BoundedSemantics::subset(tv[i], tv[j]);
    }
    if (!redundant) result.formulas.push_back(sat[i]);
  }
  return result;
}

}  // namespace force
