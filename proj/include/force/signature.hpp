#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "force/error.hpp"

namespace force {

// Relations are restricted to this many arguments so literals stay fixed-size.
inline constexpr std::size_t kMaxArity = 4;

struct Sort {
  std::string name;
  int index = 0;

  bool operator==(const Sort&) const = default;
};

struct Relation {
  std::string name;
  std::vector<int> arg_sorts;
  int index = 0;

  int arity() const { return static_cast<int>(arg_sorts.size()); }
  bool operator==(const Relation&) const = default;
};

// Sorted, equality-free relational vocabulary. Sort and relation indices are
// their declaration positions and drive every canonical ordering.
class Signature {
 public:
  int add_sort(std::string name) {
    if (find_sort(name)) throw SignatureError("duplicate sort '" + name + "'");
    int index = static_cast<int>(sorts_.size());
    sorts_.push_back(Sort{std::move(name), index});
    return index;
  }

  int add_relation(std::string name, std::vector<int> arg_sorts) {
    if (find_relation(name)) throw SignatureError("duplicate relation '" + name + "'");
    if (arg_sorts.empty()) throw SignatureError("relation '" + name + "' has no arguments");
    if (arg_sorts.size() > kMaxArity)
      throw SignatureError("relation '" + name + "' exceeds the maximum arity of " +
                           std::to_string(kMaxArity));
    for (int s : arg_sorts) {
      if (s < 0 || s >= num_sorts())
        throw SignatureError("relation '" + name + "' refers to an unknown sort");
    }
    int index = static_cast<int>(relations_.size());
    relations_.push_back(Relation{std::move(name), std::move(arg_sorts), index});
    return index;
  }

  const std::vector<Sort>& sorts() const { return sorts_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const Sort& sort(int i) const { return sorts_.at(i); }
  const Relation& relation(int i) const { return relations_.at(i); }
  int num_sorts() const { return static_cast<int>(sorts_.size()); }
  int num_relations() const { return static_cast<int>(relations_.size()); }

  std::optional<int> find_sort(std::string_view name) const {
    for (const auto& s : sorts_)
      if (s.name == name) return s.index;
    return std::nullopt;
  }

  std::optional<int> find_relation(std::string_view name) const {
    for (const auto& r : relations_)
      if (r.name == name) return r.index;
    return std::nullopt;
  }

  bool operator==(const Signature&) const = default;

 private:
  std::vector<Sort> sorts_;
  std::vector<Relation> relations_;
};

// A quantified variable, identified by its sort and its ordinal within the
// sort (the config's `n2` is {node, 1}).
struct Variable {
  std::uint8_t sort = 0;
  std::uint8_t idx = 0;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

}  // namespace force
