#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "force/signature.hpp"

namespace force {

// Atom or negated atom. The total order is (relation, arguments, polarity)
// with the positive literal first, so `lit < negate(lit)` always holds.
struct Literal {
  std::uint16_t rel = 0;
  std::uint8_t arity = 0;
  bool negated = false;
  std::array<Variable, kMaxArity> args{};

  std::span<const Variable> arguments() const { return {args.data(), arity}; }

  bool same_atom(const Literal& o) const {
    return rel == o.rel && arity == o.arity && args == o.args;
  }

  bool uses(Variable v) const {
    for (std::size_t i = 0; i < arity; ++i)
      if (args[i] == v) return true;
    return false;
  }

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.rel <=> b.rel; c != 0) return c;
    if (auto c = a.arity <=> b.arity; c != 0) return c;
    for (std::size_t i = 0; i < kMaxArity; ++i)
      if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
    return a.negated <=> b.negated;
  }
};

inline Literal make_literal(int rel, std::initializer_list<Variable> args, bool negated = false) {
  Literal l;
  l.rel = static_cast<std::uint16_t>(rel);
  l.arity = static_cast<std::uint8_t>(args.size());
  l.negated = negated;
  std::copy(args.begin(), args.end(), l.args.begin());
  return l;
}

inline Literal negate(Literal l) {
  l.negated = !l.negated;
  return l;
}

// Conjunction of literals, kept sorted and duplicate-free once canonical.
using Cube = std::vector<Literal>;

enum class Quantifier : std::uint8_t { kForall = 0, kExists = 1 };

struct Binding {
  Variable var;
  Quantifier quantifier = Quantifier::kForall;

  friend auto operator<=>(const Binding&, const Binding&) = default;
};

// Prenex formula with a DNF matrix. `distinct` selects the quantification
// semantics: when set, same-sort variables range over pairwise-distinct
// elements.
//
// A Formula is a plain value; it only satisfies the canonical-form invariants
// when produced by canonicalize()/normalize() or by slice enumeration.
struct Formula {
  std::vector<Binding> prefix;
  std::vector<Cube> matrix;
  bool distinct = true;

  std::size_t num_exists() const {
    return static_cast<std::size_t>(std::count_if(prefix.begin(), prefix.end(), [](const Binding& b) {
      return b.quantifier == Quantifier::kExists;
    }));
  }

  std::size_t num_literals() const {
    std::size_t n = 0;
    for (const auto& c : matrix) n += c.size();
    return n;
  }

  bool is_clause() const {
    return std::all_of(matrix.begin(), matrix.end(), [](const Cube& c) { return c.size() == 1; });
  }

  // Prefix variables per sort.
  std::vector<int> var_counts(int num_sorts) const {
    std::vector<int> counts(static_cast<std::size_t>(num_sorts), 0);
    for (const auto& b : prefix) ++counts.at(b.var.sort);
    return counts;
  }

  // Cube sizes sorted ascending.
  std::vector<int> cube_sizes() const {
    std::vector<int> sizes;
    sizes.reserve(matrix.size());
    for (const auto& c : matrix) sizes.push_back(static_cast<int>(c.size()));
    std::sort(sizes.begin(), sizes.end());
    return sizes;
  }

  std::ptrdiff_t position_of(Variable v) const {
    for (std::size_t i = 0; i < prefix.size(); ++i)
      if (prefix[i].var == v) return static_cast<std::ptrdiff_t>(i);
    return -1;
  }

  bool mentions(Variable v) const {
    for (const auto& c : matrix)
      for (const auto& l : c)
        if (l.uses(v)) return true;
    return false;
  }

  friend bool operator==(const Formula&, const Formula&) = default;
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
    if (auto c = a.prefix <=> b.prefix; c != 0) return c;
    if (auto c = a.matrix <=> b.matrix; c != 0) return c;
    return a.distinct <=> b.distinct;
  }
};

inline std::size_t hash_value(const Formula& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  mix(f.distinct ? 1 : 0);
  for (const auto& b : f.prefix)
    mix((std::uint64_t{b.var.sort} << 16) | (std::uint64_t{b.var.idx} << 8) |
        static_cast<std::uint64_t>(b.quantifier));
  for (const auto& c : f.matrix) {
    mix(0xffffULL);
    for (const auto& l : c) {
      std::uint64_t v = (std::uint64_t{l.rel} << 1) | (l.negated ? 1 : 0);
      for (std::size_t i = 0; i < l.arity; ++i)
        v = v * 1315423911ULL + ((std::uint64_t{l.args[i].sort} << 8) | l.args[i].idx);
      mix(v);
    }
  }
  return static_cast<std::size_t>(h);
}

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return hash_value(f); }
};

}  // namespace force
