#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "force/error.hpp"
#include "force/io/config.hpp"
#include "force/search_spec.hpp"
#include "force/structure.hpp"

namespace force {

inline constexpr std::string_view kLockservConfig =
    "var: node: n1, n2; lock: l1\n"
    "relations: lock_msg:          node, lock;  grant_msg:  node, lock;\n"
    "           unlock_msg:        node, lock;  holds_lock: node, lock;\n"
    "           server_holds_lock: lock\n"
    "max-literal: 4 max-or: 3 max-and: 3 max-exists: 1\n";

inline constexpr std::string_view kToyConfig =
    "var: X: x1\n"
    "relations: p: X; q: X; r: X\n"
    "max-literal: 2 max-or: 2 max-and: 1 max-exists: 0\n";

inline SearchSpec lockserv_spec() { return io::parse_config(kLockservConfig); }
inline SearchSpec toy_spec() { return io::parse_config(kToyConfig); }

// Uniform integer in [0, n) from the raw generator output; identical on every
// platform, unlike std::uniform_int_distribution.
inline std::uint64_t pick_below(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }

inline bool coin(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 < p;
}

struct Sample {
  Structure state;
  std::string label;  // trace metadata, e.g. "run=0 step=3"
};

// Lock server: clients send lock requests; the server grants a lock it holds
// to a requester; the client takes the grant, later unlocks, and the server
// gets the lock back when it receives the unlock message.
//
//   send_lock(n,l)    always              lock_msg(n,l) := 1
//   recv_lock(n,l)    server_holds_lock(l) & lock_msg(n,l)
//                                         server_holds_lock(l), lock_msg(n,l) := 0; grant_msg(n,l) := 1
//   recv_grant(n,l)   grant_msg(n,l)      grant_msg(n,l) := 0; holds_lock(n,l) := 1
//   unlock(n,l)       holds_lock(n,l)     holds_lock(n,l) := 0; unlock_msg(n,l) := 1
//   recv_unlock(n,l)  unlock_msg(n,l)     unlock_msg(n,l) := 0; server_holds_lock(l) := 1
//
// Initially the server holds every lock and no message is in flight.
class LockservSim {
 public:
  LockservSim(const Signature& sig, int nodes, int locks) : sig_(sig), nodes_(nodes), locks_(locks) {
    auto rel = [&](const char* name) {
      auto r = sig.find_relation(name);
      if (!r) throw SignatureError(std::string("lockserv signature lacks relation '") + name + "'");
      return *r;
    };
    lock_msg_ = rel("lock_msg");
    grant_msg_ = rel("grant_msg");
    unlock_msg_ = rel("unlock_msg");
    holds_lock_ = rel("holds_lock");
    server_holds_lock_ = rel("server_holds_lock");
    auto node = sig.find_sort("node"), lock = sig.find_sort("lock");
    if (!node || !lock || sig.num_sorts() != 2) throw SignatureError("lockserv signature needs sorts node and lock");
    universe_.assign(2, 0);
    universe_[*node] = nodes;
    universe_[*lock] = locks;
  }

  Structure initial() const {
    Structure m(sig_, universe_);
    for (int l = 0; l < locks_; ++l) m.set(server_holds_lock_, std::array{l});
    return m;
  }

  // Applies one uniformly chosen enabled action.
  void step(Structure& m, std::mt19937_64& rng) const {
    enum Action { kSendLock, kRecvLock, kRecvGrant, kUnlock, kRecvUnlock };
    std::vector<std::array<int, 3>> enabled;
    for (int n = 0; n < nodes_; ++n)
      for (int l = 0; l < locks_; ++l) {
        enabled.push_back({kSendLock, n, l});
        if (m.holds(server_holds_lock_, std::array{l}) && has(m, lock_msg_, n, l)) enabled.push_back({kRecvLock, n, l});
        if (has(m, grant_msg_, n, l)) enabled.push_back({kRecvGrant, n, l});
        if (has(m, holds_lock_, n, l)) enabled.push_back({kUnlock, n, l});
        if (has(m, unlock_msg_, n, l)) enabled.push_back({kRecvUnlock, n, l});
      }
    auto [a, n, l] = enabled[pick_below(rng, enabled.size())];
    auto put = [&](int rel, bool v) { m.set(rel, std::array{n, l}, v); };
    switch (a) {
      case kSendLock: put(lock_msg_, true); break;
      case kRecvLock:
        m.set(server_holds_lock_, std::array{l}, false);
        put(lock_msg_, false);
        put(grant_msg_, true);
        break;
      case kRecvGrant:
        put(grant_msg_, false);
        put(holds_lock_, true);
        break;
      case kUnlock:
        put(holds_lock_, false);
        put(unlock_msg_, true);
        break;
      case kRecvUnlock:
        put(unlock_msg_, false);
        m.set(server_holds_lock_, std::array{l}, true);
        break;
    }
  }

  // Runs from the initial state for `steps` steps, recording the state before
  // the first step and after each one; restarts until `count` samples exist.
  std::vector<Sample> run(int steps, int count, std::uint64_t seed) const {
    if (steps < 0 || count < 1) throw Error("steps must be non-negative and samples positive");
    std::mt19937_64 rng(seed);
    std::vector<Sample> out;
    for (int r = 0; static_cast<int>(out.size()) < count; ++r) {
      Structure m = initial();
      for (int s = 0; s <= steps && static_cast<int>(out.size()) < count; ++s) {
        if (s > 0) step(m, rng);
        out.push_back({m, "run=" + std::to_string(r) + " step=" + std::to_string(s)});
      }
    }
    return out;
  }

 private:
  bool has(const Structure& m, int rel, int n, int l) const { return m.holds(rel, std::array{n, l}); }

  const Signature& sig_;
  int nodes_, locks_;
  std::vector<int> universe_;
  int lock_msg_ = 0, grant_msg_ = 0, unlock_msg_ = 0, holds_lock_ = 0, server_holds_lock_ = 0;
};

// Independent per-tuple coin flips with probability `density`.
inline Structure random_structure(const Signature& sig, const std::vector<int>& universe, double density,
                                  std::mt19937_64& rng) {
  Structure m(sig, universe);
  for (int r = 0; r < sig.num_relations(); ++r)
    for (std::size_t i = 0; i < m.table_size(r); ++i) m.set_at(r, i, coin(rng, density));
  return m;
}

inline std::vector<Sample> random_models(const Signature& sig, const std::vector<int>& universe, int count,
                                         double density, std::uint64_t seed) {
  if (count < 1) throw Error("samples must be positive");
  if (!(density >= 0.0 && density <= 1.0)) throw Error("density must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<Sample> out;
  for (int i = 0; i < count; ++i) out.push_back({random_structure(sig, universe, density, rng), "model=" + std::to_string(i)});
  return out;
}

}  // namespace force
