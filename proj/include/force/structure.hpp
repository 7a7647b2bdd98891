#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "force/error.hpp"
#include "force/signature.hpp"

namespace force {

// Finite first-order structure. Elements of sort s are 0..universe(s)-1; each
// relation is a dense truth table over its argument tuples.
class Structure {
 public:
  Structure() = default;

  Structure(const Signature& sig, std::vector<int> universe) : universe_(std::move(universe)) {
    if (static_cast<int>(universe_.size()) != sig.num_sorts())
      throw SignatureError("structure lists " + std::to_string(universe_.size()) +
                           " universes for " + std::to_string(sig.num_sorts()) + " sorts");
    for (std::size_t s = 0; s < universe_.size(); ++s)
      if (universe_[s] < 1)
        throw SignatureError("universe of sort '" + sig.sort(static_cast<int>(s)).name +
                             "' must be non-empty");
    tables_.resize(sig.relations().size());
    strides_.resize(sig.relations().size());
    for (const auto& rel : sig.relations()) {
      std::size_t size = 1;
      auto& strides = strides_[rel.index];
      strides.fill(0);
      for (int i = rel.arity() - 1; i >= 0; --i) {
        strides[i] = static_cast<std::uint32_t>(size);
        size *= static_cast<std::size_t>(universe_[rel.arg_sorts[i]]);
      }
      tables_[rel.index].assign(size, 0);
      arg_sorts_.push_back(rel.arg_sorts);
    }
  }

  const std::vector<int>& universe() const { return universe_; }
  int universe(int sort) const { return universe_.at(sort); }
  int num_relations() const { return static_cast<int>(tables_.size()); }
  std::size_t table_size(int rel) const { return tables_.at(rel).size(); }

  void set(int rel, std::span<const int> tuple, bool value = true) {
    tables_.at(rel)[index_of(rel, tuple)] = value ? 1 : 0;
  }

  bool holds(int rel, std::span<const int> tuple) const { return tables_.at(rel)[index_of(rel, tuple)] != 0; }

  // Unchecked lookup for the evaluator's inner loop.
  bool holds_at(int rel, std::size_t flat_index) const { return tables_[rel][flat_index] != 0; }
  std::uint32_t stride(int rel, int position) const { return strides_[rel][position]; }

  // Flat-table access used by structure enumeration.
  void set_at(int rel, std::size_t flat_index, bool value) { tables_[rel][flat_index] = value ? 1 : 0; }

  // True tuples of `rel`, in ascending lexicographic order.
  std::vector<std::vector<int>> tuples(int rel) const {
    std::vector<std::vector<int>> out;
    const auto& sorts = arg_sorts_.at(rel);
    const auto& table = tables_.at(rel);
    for (std::size_t flat = 0; flat < table.size(); ++flat) {
      if (!table[flat]) continue;
      std::vector<int> tuple(sorts.size());
      for (std::size_t i = 0; i < sorts.size(); ++i)
        tuple[i] = static_cast<int>((flat / strides_[rel][i]) % static_cast<std::size_t>(universe_[sorts[i]]));
      out.push_back(std::move(tuple));
    }
    return out;
  }

  friend bool operator==(const Structure& a, const Structure& b) {
    return a.universe_ == b.universe_ && a.tables_ == b.tables_;
  }

 private:
  std::size_t index_of(int rel, std::span<const int> tuple) const {
    const auto& sorts = arg_sorts_.at(rel);
    if (tuple.size() != sorts.size())
      throw SignatureError("tuple arity " + std::to_string(tuple.size()) + " does not match relation arity " +
                           std::to_string(sorts.size()));
    std::size_t flat = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (tuple[i] < 0 || tuple[i] >= universe_[sorts[i]])
        throw SignatureError("element " + std::to_string(tuple[i]) + " out of range for its sort");
      flat += static_cast<std::size_t>(tuple[i]) * strides_[rel][i];
    }
    return flat;
  }

  std::vector<int> universe_;
  std::vector<std::vector<std::uint8_t>> tables_;
  std::vector<std::array<std::uint32_t, kMaxArity>> strides_;
  std::vector<std::vector<int>> arg_sorts_;
};

}  // namespace force
