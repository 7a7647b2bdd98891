#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "force/canonical.hpp"
#include "force/entailment.hpp"
#include "force/error.hpp"
#include "force/evaluate.hpp"
#include "force/pruning_store.hpp"
#include "force/search_space.hpp"
#include "force/slicing.hpp"

namespace force {

struct SynthesisOptions {
  // Skip candidates entailed by an already satisfied formula.
  bool satisfied_blocking = true;
  // Admit DNF candidates only when all their derived clauses hold.
  bool dnf_modulo_clauses = true;
  unsigned threads = 1;
};

struct SliceStats {
  SliceParams params;
  bool clause_phase = true;
  int level = 0;
  std::uint64_t generated = 0;
  std::uint64_t filtered = 0;  // rejected by the clause filter
  std::uint64_t blocked = 0;   // entailed by a satisfied formula
  std::uint64_t tested = 0;
  std::uint64_t satisfied = 0;
  double seconds = 0;
};

struct SynthesisStats {
  std::vector<SliceStats> slices;
  double clause_seconds = 0;
  double dnf_seconds = 0;
  double minimize_seconds = 0;
  std::size_t structures = 0;  // after deduplication

  SliceStats totals() const {
    SliceStats t;
    for (const auto& s : slices) {
      t.generated += s.generated;
      t.filtered += s.filtered;
      t.blocked += s.blocked;
      t.tested += s.tested;
      t.satisfied += s.satisfied;
      t.seconds += s.seconds;
    }
    return t;
  }
};

struct SynthesisResult {
  // Entailment-maximal satisfied clauses of the clause phase, before any
  // DNF formula is taken into account; this is the exported clause filter.
  std::vector<Formula> clauses;
  std::vector<Formula> phi_c;
  std::vector<Formula> phi_f;
  SynthesisStats stats;
  std::vector<std::string> warnings;

  // phi_c and phi_f merged in canonical order.
  std::vector<Formula> formulas() const {
    std::vector<Formula> all = phi_c;
    all.insert(all.end(), phi_f.begin(), phi_f.end());
    std::sort(all.begin(), all.end());
    return all;
  }
};

// Checks the structures against the spec's signature and the universe-size
// precondition that keeps syntactic entailment sound.
inline void validate_structures(const SearchSpec& spec, std::span<const Structure> sigma) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const auto& m = sigma[i];
    if (static_cast<int>(m.universe().size()) != spec.num_sorts() ||
        m.num_relations() != spec.signature.num_relations())
      throw SignatureError("structure " + std::to_string(i) + " does not match the signature");
    for (int s = 0; s < spec.num_sorts(); ++s)
      if (m.universe(s) < spec.var_budget[s])
        throw PreconditionError("structure " + std::to_string(i) + ": universe of sort '" +
                                spec.signature.sort(s).name + "' has " + std::to_string(m.universe(s)) +
                                " elements, fewer than its " + std::to_string(spec.var_budget[s]) + " variables");
  }
}

inline std::vector<Structure> dedupe_structures(std::span<const Structure> sigma) {
  std::vector<Structure> out;
  for (const auto& m : sigma)
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  return out;
}

// Formulas of the slice, not blocked by `store`, that hold on all of `sigma`.
inline std::vector<Formula> fo_syn(const SearchSpec& spec, const SliceParams& params, std::span<const Structure> sigma,
                                   const PruningStore& store) {
  validate_structures(spec, sigma);
  std::vector<Formula> out;
  for (auto& f : enumerate_slice(spec, params, store))
    if (satisfies_all(spec.signature, f, sigma)) out.push_back(std::move(f));
  return out;
}

// Removes every formula entailed by a different member; among mutually
// entailing formulas the canonically least survives. Output is sorted.
inline std::vector<Formula> minimize(std::vector<Formula> formulas) {
  std::sort(formulas.begin(), formulas.end());
  formulas.erase(std::unique(formulas.begin(), formulas.end()), formulas.end());
  std::vector<EntailmentSummary> sums;
  sums.reserve(formulas.size());
  for (const auto& f : formulas) sums.emplace_back(f);
  std::vector<Formula> kept;
  for (std::size_t i = 0; i < formulas.size(); ++i) {
    bool redundant = false;
    for (std::size_t j = 0; j < formulas.size() && !redundant; ++j) {
      if (i == j || !entails_syntactic(formulas[j], sums[j], formulas[i], sums[i])) continue;
      redundant = j < i || !entails_syntactic(formulas[i], sums[i], formulas[j], sums[j]);
    }
    if (!redundant) kept.push_back(formulas[i]);
  }
  return kept;
}

// Drops the clauses entailed by some non-clause formula.
inline std::vector<Formula> filter_implied(const std::vector<Formula>& phi_c, const std::vector<Formula>& phi_f) {
  std::vector<EntailmentSummary> fs;
  for (const auto& f : phi_f) fs.emplace_back(f);
  std::vector<Formula> out;
  for (const auto& c : phi_c) {
    EntailmentSummary cs(c);
    bool implied = false;
    for (std::size_t i = 0; i < phi_f.size() && !implied; ++i) implied = entails_syntactic(phi_f[i], fs[i], c, cs);
    if (!implied) out.push_back(c);
  }
  return out;
}

namespace detail {

struct SliceOutcome {
  std::vector<Formula> found;     // satisfied, to be appended to the store
  std::vector<Formula> entailed;  // skipped because a satisfied formula entails them
  SliceStats stats;
};

class SliceRunner {
 public:
  SliceRunner(const SearchSpec& spec, std::span<const Structure> sigma, const PruningStore& store,
              std::size_t visible, const ClauseFilter* filter, const SynthesisOptions& options)
      : spec_(spec), sigma_(sigma), store_(store), visible_(visible), filter_(filter), options_(options) {}

  SliceOutcome run(const SliceParams& params) const {
    auto start = std::chrono::steady_clock::now();
    SliceOutcome out;
    out.stats.params = params;
    out.stats.clause_phase = params.is_clause_slice();
    PruningStore local;
    std::size_t hint = 0;
    SliceEnumerator(spec_, params).for_each([&](const Formula& f) {
      ++out.stats.generated;
      if (filter_ && !filter_->admits(f)) {
        ++out.stats.filtered;
        return true;
      }
      if (options_.satisfied_blocking) {
        EntailmentSummary fs(f);
        const Formula* blocker = nullptr;
        if (auto i = store_.find_entailing(f, fs, visible_)) blocker = &store_[*i];
        else if (auto k = local.find_entailing(f, fs, local.size())) blocker = &local[*k];
        if (blocker) {
          ++out.stats.blocked;
          out.entailed.push_back(f);
          // An equivalent formula that sorts first is kept so ties resolve
          // the same way whatever the visiting order.
          if (f < *blocker && entails_syntactic(f, *blocker)) {
            ++out.stats.satisfied;
            out.found.push_back(f);
            local.add(f);
          }
          return true;
        }
      }
      ++out.stats.tested;
      if (holds_everywhere(f, hint)) {
        ++out.stats.satisfied;
        out.found.push_back(f);
        if (options_.satisfied_blocking) local.add(f);
      }
      return true;
    });
    out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }

 private:
  // Starts with the structure that refuted the previous candidate.
  bool holds_everywhere(const Formula& f, std::size_t& hint) const {
    if (sigma_.empty()) return true;
    Evaluator ev(spec_.signature, f);
    for (std::size_t k = 0; k < sigma_.size(); ++k) {
      std::size_t i = (hint + k) % sigma_.size();
      if (!ev(sigma_[i])) {
        hint = i;
        return false;
      }
    }
    return true;
  }

  const SearchSpec& spec_;
  std::span<const Structure> sigma_;
  const PruningStore& store_;
  std::size_t visible_;
  const ClauseFilter* filter_;
  const SynthesisOptions& options_;
};

// Runs every level of `levels`; slices of a level see the store as it was
// when the level started, which keeps results independent of scheduling.
inline void run_phase(const SearchSpec& spec, std::span<const Structure> sigma,
                      const std::vector<std::vector<SliceParams>>& levels, PruningStore& store,
                      const ClauseFilter* filter, const SynthesisOptions& options, std::vector<Formula>& found,
                      std::vector<Formula>* entailed, SynthesisStats& stats) {
  for (std::size_t lv = 0; lv < levels.size(); ++lv) {
    const auto& level = levels[lv];
    SliceRunner runner(spec, sigma, store, store.size(), filter, options);
    std::vector<SliceOutcome> outcomes(level.size());
    unsigned workers = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(level.size())));
    if (workers == 1) {
      for (std::size_t i = 0; i < level.size(); ++i) outcomes[i] = runner.run(level[i]);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < level.size(); i = next++) outcomes[i] = runner.run(level[i]);
        });
      for (auto& t : pool) t.join();
    }
    for (auto& o : outcomes) {
      o.stats.level = static_cast<int>(lv);
      for (auto& f : o.found) {
        if (options.satisfied_blocking) store.add(f);
        found.push_back(f);
      }
      if (entailed) entailed->insert(entailed->end(), o.entailed.begin(), o.entailed.end());
      stats.slices.push_back(o.stats);
    }
  }
}

inline double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace detail

// Clause slices first, in slice order, feeding the pruning store; then the
// DNF slices admitted by the clause filter; finally the result is reduced to
// mutually non-entailing formulas.
inline SynthesisResult synthesize(const SearchSpec& spec, std::span<const Structure> input,
                                  const SynthesisOptions& options = {}) {
  spec.validate();
  validate_structures(spec, input);
  SynthesisResult result;
  const auto sigma = dedupe_structures(input);
  result.stats.structures = sigma.size();
  if (sigma.empty()) result.warnings.push_back("no input structures: every candidate holds vacuously");

  const auto split = split_dnf(spec);
  PruningStore store;

  auto t0 = std::chrono::steady_clock::now();
  std::vector<Formula> found_clauses, entailed_clauses;
  detail::run_phase(spec, sigma, split_tem(split.clause_space), store, nullptr, options, found_clauses,
                    &entailed_clauses, result.stats);
  result.stats.clause_seconds = detail::seconds_since(t0);

  auto t1 = std::chrono::steady_clock::now();
  std::vector<Formula> found_dnf;
  if (!split.dnf_space.empty()) {
    std::optional<ClauseFilter> filter;
    if (options.dnf_modulo_clauses) {
      // Every satisfied clause, found or entailed, so membership is exact.
      std::unordered_set<Formula, FormulaHash> seen;
      std::vector<Formula> closure;
      for (const auto* part : {&found_clauses, &entailed_clauses})
        for (const auto& c : *part)
          if (seen.insert(c).second) closure.push_back(c);
      filter.emplace(spec, std::move(closure), true);
    }
    detail::run_phase(spec, sigma, split_tem(split.dnf_space), store, filter ? &*filter : nullptr, options,
                      found_dnf, nullptr, result.stats);
  }
  result.stats.dnf_seconds = detail::seconds_since(t1);

  auto t2 = std::chrono::steady_clock::now();
  result.clauses = minimize(found_clauses);
  auto phi_f = minimize(found_dnf);
  auto all = filter_implied(result.clauses, phi_f);
  all.insert(all.end(), phi_f.begin(), phi_f.end());
  for (auto& f : minimize(std::move(all))) (f.is_clause() ? result.phi_c : result.phi_f).push_back(std::move(f));
  result.stats.minimize_seconds = detail::seconds_since(t2);
  return result;
}

}  // namespace force
