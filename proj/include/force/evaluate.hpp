#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "force/error.hpp"
#include "force/formula.hpp"
#include "force/structure.hpp"

namespace force {

inline constexpr std::size_t kMaxPrefix = 32;

// A formula lowered to prefix slots so it can be checked against many
// structures without re-resolving variables.
class Evaluator {
 public:
  Evaluator(const Signature& sig, const Formula& f) : distinct_(f.distinct), num_relations_(sig.num_relations()) {
    if (f.prefix.size() > kMaxPrefix) throw SignatureError("prefix longer than " + std::to_string(kMaxPrefix));
    num_sorts_ = sig.num_sorts();
    for (std::size_t i = 0; i < f.prefix.size(); ++i) {
      const auto& b = f.prefix[i];
      if (b.var.sort >= sig.num_sorts()) throw SignatureError("variable of unknown sort");
      for (std::size_t j = 0; j < i; ++j)
        if (f.prefix[j].var == b.var) throw SignatureError("variable bound twice");
      Slot slot;
      slot.sort = b.var.sort;
      slot.exists = b.quantifier == Quantifier::kExists;
      for (std::size_t j = 0; j < i; ++j)
        if (f.prefix[j].var.sort == b.var.sort) slot.same_sort_before.push_back(static_cast<std::uint8_t>(j));
      slots_.push_back(std::move(slot));
    }
    for (const auto& cube : f.matrix) {
      std::vector<Lit> lits;
      for (const auto& l : cube) {
        if (l.rel >= sig.num_relations()) throw SignatureError("literal over unknown relation");
        const auto& rel = sig.relation(l.rel);
        if (rel.arity() != l.arity) throw SignatureError("arity mismatch in literal over '" + rel.name + "'");
        Lit lit;
        lit.rel = l.rel;
        lit.negated = l.negated;
        lit.arity = l.arity;
        for (std::size_t i = 0; i < l.arity; ++i) {
          if (l.args[i].sort != rel.arg_sorts[i])
            throw SignatureError("argument " + std::to_string(i) + " of '" + rel.name + "' has the wrong sort");
          auto pos = f.position_of(l.args[i]);
          if (pos < 0) throw SignatureError("unbound variable in literal over '" + rel.name + "'");
          lit.slot[i] = static_cast<std::uint8_t>(pos);
        }
        lits.push_back(lit);
      }
      cubes_.push_back(std::move(lits));
    }
  }

  bool operator()(const Structure& m) const {
    if (static_cast<int>(m.universe().size()) != num_sorts_ || m.num_relations() != num_relations_)
      throw SignatureError("structure does not match the formula's signature");
    std::array<int, kMaxPrefix> values{};
    return eval(m, 0, values);
  }

 private:
  struct Slot {
    int sort = 0;
    bool exists = false;
    std::vector<std::uint8_t> same_sort_before;
  };
  struct Lit {
    std::uint16_t rel = 0;
    bool negated = false;
    std::uint8_t arity = 0;
    std::array<std::uint8_t, kMaxArity> slot{};
  };

  bool eval(const Structure& m, std::size_t depth, std::array<int, kMaxPrefix>& values) const {
    if (depth == slots_.size()) return matrix(m, values);
    const Slot& slot = slots_[depth];
    const int n = m.universe(slot.sort);
    for (int e = 0; e < n; ++e) {
      if (distinct_) {
        bool clash = false;
        for (auto j : slot.same_sort_before)
          if (values[j] == e) {
            clash = true;
            break;
          }
        if (clash) continue;
      }
      values[depth] = e;
      bool sub = eval(m, depth + 1, values);
      if (slot.exists && sub) return true;
      if (!slot.exists && !sub) return false;
    }
    // Exhausted domain (possibly empty under distinctness).
    return !slot.exists;
  }

  bool matrix(const Structure& m, const std::array<int, kMaxPrefix>& values) const {
    for (const auto& cube : cubes_) {
      bool all = true;
      for (const auto& l : cube) {
        std::size_t flat = 0;
        for (std::size_t i = 0; i < l.arity; ++i)
          flat += static_cast<std::size_t>(values[l.slot[i]]) * m.stride(l.rel, static_cast<int>(i));
        if (m.holds_at(l.rel, flat) == l.negated) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }

  bool distinct_;
  int num_relations_;
  int num_sorts_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::vector<Lit>> cubes_;
};

// m |= f under the formula's quantification semantics.
inline bool evaluate(const Signature& sig, const Formula& f, const Structure& m) { return Evaluator(sig, f)(m); }

// True iff f holds on every structure in `sigma` (vacuously true for an empty set).
inline bool satisfies_all(const Signature& sig, const Formula& f, std::span<const Structure> sigma) {
  Evaluator ev(sig, f);
  for (const auto& m : sigma)
    if (!ev(m)) return false;
  return true;
}

}  // namespace force
