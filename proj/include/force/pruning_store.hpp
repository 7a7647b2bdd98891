#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "force/entailment.hpp"
#include "force/formula.hpp"

namespace force {

// Append-only record of formulas known to hold on every input structure. A
// candidate entailed by a stored formula is satisfied as well and needs no
// test. Reads may run concurrently; appends must not overlap with reads.
class PruningStore {
 public:
  void add(Formula f) {
    summaries_.emplace_back(f);
    formulas_.push_back(std::move(f));
  }

  std::size_t size() const { return formulas_.size(); }
  bool empty() const { return formulas_.empty(); }
  const Formula& operator[](std::size_t i) const { return formulas_[i]; }
  const EntailmentSummary& summary(std::size_t i) const { return summaries_[i]; }
  const std::vector<Formula>& formulas() const { return formulas_; }

  // First stored formula among the first `limit` that entails `f`.
  std::optional<std::size_t> find_entailing(const Formula& f, const EntailmentSummary& fs,
                                            std::size_t limit) const {
    limit = std::min(limit, formulas_.size());
    for (std::size_t i = 0; i < limit; ++i)
      if (entails_syntactic(formulas_[i], summaries_[i], f, fs)) return i;
    return std::nullopt;
  }

  bool blocks(const Formula& f) const { return find_entailing(f, EntailmentSummary(f), size()).has_value(); }

 private:
  std::vector<Formula> formulas_;
  std::vector<EntailmentSummary> summaries_;
};

}  // namespace force
