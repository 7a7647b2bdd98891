#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "force/canonical.hpp"
#include "force/formula.hpp"

namespace force {

// Cheap necessary conditions for entailment, precomputed once per formula so
// pruning-store scans can reject most pairs without a substitution search.
struct EntailmentSummary {
  std::vector<std::uint64_t> cube_masks;  // (relation, polarity) bits per cube
  std::vector<std::uint8_t> cube_sizes;
  std::array<std::uint8_t, 16> sort_counts{};
  std::uint8_t num_exists = 0;
  bool maskable = true;

  explicit EntailmentSummary(const Formula& f) {
    for (const auto& c : f.matrix) {
      std::uint64_t m = 0;
      for (const auto& l : c) {
        unsigned bit = 2u * l.rel + (l.negated ? 1u : 0u);
        if (bit >= 64) maskable = false;
        else m |= std::uint64_t{1} << bit;
      }
      cube_masks.push_back(m);
      cube_sizes.push_back(static_cast<std::uint8_t>(c.size()));
    }
    for (const auto& b : f.prefix) {
      if (b.var.sort < sort_counts.size()) ++sort_counts[b.var.sort];
      else maskable = false;
    }
    num_exists = static_cast<std::uint8_t>(f.num_exists());
  }
};

namespace detail {

class SubstitutionSearch {
 public:
  SubstitutionSearch(const Formula& strong, const Formula& weak)
      : s_(strong), w_(weak), theta_(strong.prefix.size(), -1), users_(weak.prefix.size(), 0),
        exists_user_(weak.prefix.size(), false) {}

  bool run() { return assign(0); }

 private:
  bool is_exists(const Formula& f, std::size_t i) const { return f.prefix[i].quantifier == Quantifier::kExists; }

  bool assign(std::size_t i) {
    if (i == s_.prefix.size()) return matrix_weakens();
    const Variable sv = s_.prefix[i].var;
    const bool s_exists = is_exists(s_, i);
    for (std::size_t j = 0; j < w_.prefix.size(); ++j) {
      if (w_.prefix[j].var.sort != sv.sort) continue;
      if (s_exists && !is_exists(w_, j)) continue;
      // Injective under distinct semantics; otherwise only universals may merge.
      if (users_[j] > 0 && (s_.distinct || s_exists || exists_user_[j])) continue;
      if (!order_ok(i, j)) continue;
      theta_[i] = static_cast<int>(j);
      ++users_[j];
      if (s_exists) exists_user_[j] = true;
      if (assign(i + 1)) return true;
      --users_[j];
      if (s_exists) exists_user_[j] = false;
      theta_[i] = -1;
    }
    return false;
  }

  // Dependency constraints for mapping strong position i to weak position j,
  // given positions 0..i-1 are mapped.
  bool order_ok(std::size_t i, std::size_t j) const {
    const Variable sv = s_.prefix[i].var;
    if (is_exists(s_, i)) {
      // Everything the witness may depend on is chosen before it.
      for (std::size_t k = 0; k < i; ++k)
        if (static_cast<std::size_t>(theta_[k]) >= j) return false;
      if (s_.distinct) {
        // Earlier same-sort weak variables must be images of strong predecessors.
        for (std::size_t wj = 0; wj < j; ++wj) {
          if (w_.prefix[wj].var.sort != sv.sort) continue;
          bool image = false;
          for (std::size_t k = 0; k < i && !image; ++k) image = static_cast<std::size_t>(theta_[k]) == wj;
          if (!image) return false;
        }
      }
    }
    if (s_.distinct) {
      // A later strong variable may not land before an earlier existential's image of the same sort.
      for (std::size_t k = 0; k < i; ++k)
        if (is_exists(s_, k) && s_.prefix[k].var.sort == sv.sort && j < static_cast<std::size_t>(theta_[k]))
          return false;
    }
    return true;
  }

  Variable image(Variable v) const {
    for (std::size_t k = 0; k < s_.prefix.size(); ++k)
      if (s_.prefix[k].var == v) return w_.prefix[static_cast<std::size_t>(theta_[k])].var;
    return v;
  }

  bool matrix_weakens() const {
    Cube mapped;
    for (const auto& c : s_.matrix) {
      mapped.clear();
      for (auto l : c) {
        for (std::size_t a = 0; a < l.arity; ++a) l.args[a] = image(l.args[a]);
        mapped.push_back(l);
      }
      std::sort(mapped.begin(), mapped.end());
      mapped.erase(std::unique(mapped.begin(), mapped.end()), mapped.end());
      bool covered = false;
      for (const auto& d : w_.matrix) {
        if (d.size() <= mapped.size() && std::includes(mapped.begin(), mapped.end(), d.begin(), d.end())) {
          covered = true;
          break;
        }
      }
      if (!covered) return false;
    }
    return true;
  }

  const Formula& s_;
  const Formula& w_;
  std::vector<int> theta_;
  std::vector<int> users_;
  std::vector<bool> exists_user_;
};

inline bool summary_admits(const EntailmentSummary& s, const EntailmentSummary& w, bool distinct) {
  if (!s.maskable || !w.maskable) return true;
  if (s.num_exists > w.num_exists) return false;
  if (distinct)
    for (std::size_t k = 0; k < s.sort_counts.size(); ++k)
      if (s.sort_counts[k] > w.sort_counts[k]) return false;
  for (std::size_t i = 0; i < s.cube_masks.size(); ++i) {
    bool ok = false;
    for (std::size_t j = 0; j < w.cube_masks.size() && !ok; ++j)
      ok = w.cube_sizes[j] <= s.cube_sizes[i] && (w.cube_masks[j] & ~s.cube_masks[i]) == 0;
    if (!ok) return false;
  }
  return true;
}

}  // namespace detail

// Syntactic entailment: `weak` is reachable from `strong` by a variable
// substitution (sort-preserving; injective under distinct semantics, merging
// only universals otherwise) combined with weakening moves: a universal may
// become existential, literals may be deleted from cubes, cubes may be added
// and fresh variables may be quantified. Substitutions that would reorder an
// existential witness against the variables it depends on are not allowed.
//
// Sound for every structure whose universes are at least as large as the
// per-sort variable counts of both formulas.
inline bool entails_syntactic(const Formula& strong, const Formula& weak) {
  if (strong.distinct != weak.distinct) return false;
  if (!detail::summary_admits(EntailmentSummary(strong), EntailmentSummary(weak), strong.distinct)) return false;
  return detail::SubstitutionSearch(strong, weak).run();
}

inline bool entails_syntactic(const Formula& strong, const EntailmentSummary& strong_summary, const Formula& weak,
                              const EntailmentSummary& weak_summary) {
  if (strong.distinct != weak.distinct) return false;
  if (!detail::summary_admits(strong_summary, weak_summary, strong.distinct)) return false;
  return detail::SubstitutionSearch(strong, weak).run();
}

}  // namespace force
