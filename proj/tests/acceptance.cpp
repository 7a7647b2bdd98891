// Acceptance gate: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails. Every bound and tolerance is fixed below.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <unordered_map>

#include "support/fixtures.hpp"
#include "support/naive.hpp"

namespace {

using namespace force;
namespace fs = std::filesystem;

// Micro corpus: seeds kMicroFirst .. kMicroFirst + kMicroCount - 1.
constexpr std::uint64_t kMicroFirst = 1000;
constexpr int kMicroCount = 200;
constexpr double kToySeconds = 1.0;
constexpr double kOracleSeconds = 600.0;
constexpr std::size_t kEntailingPairs = 10'000;
constexpr std::size_t kSpaceCap = 400;  // formulas per micro space in the pair search
constexpr std::size_t kLockservSampledFormulas = 2000;
constexpr int kLockservSamplesPerUniverse = 150;  // four universes, 600 samples
constexpr int kLockservSteps = 20;
constexpr std::uint64_t kLockservSeed = 42;
constexpr double kLockservSeconds = 300.0;

struct Verdict {
  bool pass;
  std::string detail;
};

double since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli(const std::string& args) {
  int status = std::system((std::string(FORCE_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const std::vector<micro::Instance>& corpus() {
  static const std::vector<micro::Instance> instances = [] {
    std::vector<micro::Instance> out;
    for (int i = 0; i < kMicroCount; ++i) out.push_back(micro::make(kMicroFirst + static_cast<std::uint64_t>(i)));
    return out;
  }();
  return instances;
}

struct Workdir {
  fs::path dir = fs::temp_directory_path() / ("force_acceptance_" + std::to_string(::getpid()));
  Workdir() { fs::create_directories(dir); }
  ~Workdir() { fs::remove_all(dir); }
  std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

const std::string kSamples = FORCE_SAMPLES_DIR;

Verdict toy_golden() {
  auto spec = toy_spec();
  auto ms = fixtures::toy_models(spec);
  auto start = std::chrono::steady_clock::now();
  auto out = synthesize(spec, ms).formulas();
  double secs = since(start);
  std::uint64_t counted = 0;
  canonical_space(spec, 1000, &counted);

  bool ok = secs < kToySeconds && counted == 42 && raw_candidate_count(spec) == 42;
  for (auto text : {"forall X1:X. p(X1) | q(X1)", "forall X1:X. p(X1) | ~r(X1)"})
    ok &= std::find(out.begin(), out.end(), fixtures::parse(spec, text)) != out.end();
  for (const auto& f : out) {
    ok &= naive::evaluate(f, ms[0]) && naive::evaluate(f, ms[1]);
    for (const auto& g : out) ok &= f == g || !entails_syntactic(f, g);
  }
  std::ostringstream d;
  d << out.size() << " formulas, raw candidates " << counted << ", " << secs << " s";
  return {ok, d.str()};
}

Verdict oracle_equivalence() {
  auto start = std::chrono::steady_clock::now();
  int mismatches = 0;
  std::string first;
  for (const auto& inst : corpus()) {
    auto mine = synthesize(inst.spec, inst.sigma).formulas();
    micro::Limits limits;
    auto oracle = brute_force_oracle(inst.spec, inst.sigma, {.max_raw = limits.max_raw, .universe_extra = 1, .max_bits = limits.max_bits});
    auto sem = BoundedSemantics::for_spec(inst.spec, 1, limits.max_bits);
    if (sem.conjunction(mine) != sem.conjunction(oracle.formulas)) {
      if (!mismatches) first = " (first: seed " + std::to_string(inst.seed) + ")";
      ++mismatches;
    }
  }
  double secs = since(start);
  std::ostringstream d;
  d << corpus().size() << " instances, " << mismatches << " mismatches" << first << ", " << secs << " s";
  return {mismatches == 0 && secs < kOracleSeconds, d.str()};
}

Verdict entailment_soundness() {
  std::size_t pairs = 0, counterexamples = 0;
  for (std::uint64_t seed = kMicroFirst; pairs < kEntailingPairs && seed < kMicroFirst + 2000; ++seed) {
    auto inst = micro::make(seed);
    auto space = canonical_space(inst.spec);
    if (space.size() > kSpaceCap) {
      std::mt19937_64 rng(seed);
      std::shuffle(space.begin(), space.end(), rng);
      space.resize(kSpaceCap);
    }
    auto ms = fixtures::bounded_structures(inst.spec);
    std::vector<std::vector<bool>> truth;
    for (const auto& f : space) {
      std::vector<bool> t;
      for (const auto& m : ms) t.push_back(naive::evaluate(f, m));
      truth.push_back(std::move(t));
    }
    for (std::size_t i = 0; i < space.size(); ++i)
      for (std::size_t j = 0; j < space.size(); ++j) {
        if (i == j || !entails_syntactic(space[i], space[j])) continue;
        ++pairs;
        for (std::size_t k = 0; k < ms.size(); ++k)
          if (truth[i][k] && !truth[j][k]) {
            ++counterexamples;
            break;
          }
      }
  }
  std::ostringstream d;
  d << pairs << " entailing pairs, " << counterexamples << " counterexamples";
  return {pairs >= kEntailingPairs && counterexamples == 0, d.str()};
}

Verdict slicing_partition() {
  std::size_t micro_bad = 0;
  for (const auto& inst : corpus()) {
    std::vector<Formula> sliced;
    for (const auto& p : enumerate_params(inst.spec)) {
      auto fs = SliceEnumerator(inst.spec, p).collect();
      sliced.insert(sliced.end(), fs.begin(), fs.end());
    }
    std::sort(sliced.begin(), sliced.end());
    micro_bad += sliced != canonical_space(inst.spec);
  }

  auto spec = lockserv_spec();
  std::unordered_map<Formula, int, FormulaHash> slice_count;
  for (const auto& p : enumerate_params(spec))
    SliceEnumerator(spec, p).for_each([&](const Formula& f) {
      ++slice_count[f];
      return true;
    });
  std::size_t repeated = 0;
  for (const auto& [f, n] : slice_count) repeated += n != 1;
  std::mt19937_64 rng(kLockservSeed);
  std::size_t missing = 0;
  for (std::size_t i = 0; i < kLockservSampledFormulas; ++i) missing += !slice_count.count(fixtures::random_canonical(spec, rng));

  std::ostringstream d;
  d << corpus().size() << " micro spaces with " << micro_bad << " mismatches; lockserv " << slice_count.size()
    << " formulas, " << repeated << " repeated, " << missing << "/" << kLockservSampledFormulas << " samples missing";
  return {micro_bad == 0 && repeated == 0 && missing == 0, d.str()};
}

std::vector<Structure> lockserv_structures(const std::string& traces) {
  return io::parse_traces(slurp(traces), lockserv_spec().signature);
}

std::string lockserv_traces(const Workdir& work) {
  auto path = work("lockserv.traces");
  if (!fs::exists(path)) {
    int code = cli("gen-traces --protocol lockserv --universe node=2,lock=1 --universe node=2,lock=2"
                   " --universe node=3,lock=1 --universe node=3,lock=2 --steps " +
                   std::to_string(kLockservSteps) + " --samples " + std::to_string(kLockservSamplesPerUniverse) +
                   " --seed " + std::to_string(kLockservSeed) + " --out " + path);
    if (code != 0) throw Error("gen-traces failed with exit code " + std::to_string(code));
  }
  return path;
}

Verdict pruning_neutrality(const Workdir& work) {
  std::size_t differing = 0;
  for (const auto& inst : corpus()) {
    auto reference = synthesize(inst.spec, inst.sigma, {.satisfied_blocking = false, .dnf_modulo_clauses = false}).formulas();
    for (bool blocking : {false, true})
      for (bool filter : {false, true}) {
        if (!blocking && !filter) continue;
        differing += synthesize(inst.spec, inst.sigma, {.satisfied_blocking = blocking, .dnf_modulo_clauses = filter}).formulas() != reference;
      }
  }
  auto spec = lockserv_spec();
  auto sigma = lockserv_structures(lockserv_traces(work));
  auto on = synthesize(spec, sigma);
  auto off = synthesize(spec, sigma, {.satisfied_blocking = false, .dnf_modulo_clauses = false});
  auto tested_on = on.stats.totals().tested, tested_off = off.stats.totals().tested;
  bool same = on.formulas() == off.formulas();
  std::ostringstream d;
  d << 3 * corpus().size() << " micro runs with " << differing << " differing sets; lockserv tested " << tested_on
    << " with pruning vs " << tested_off << " without, sets " << (same ? "identical" : "DIFFER");
  return {differing == 0 && same && tested_on < tested_off, d.str()};
}

Verdict lockserv_end_to_end(const Workdir& work) {
  auto traces = lockserv_traces(work);
  auto start = std::chrono::steady_clock::now();
  int code = cli("synth --config " + kSamples + "/lockserv.cfg --traces " + traces + " --threads 1 --out " + work("lockserv.1"));
  double secs = since(start);
  if (code != 0) return {false, "synth exit code " + std::to_string(code)};
  auto spec = io::parse_config(slurp(kSamples + "/lockserv.cfg"));
  auto sigma = io::parse_traces(slurp(traces), spec.signature);
  auto out = io::parse_formulas(slurp(work("lockserv.1")), spec);
  std::size_t failing = 0;
  for (const auto& f : out)
    for (const auto& m : sigma)
      if (!naive::evaluate(f, m)) {
        ++failing;
        break;
      }
  std::ostringstream d;
  d << 4 * kLockservSamplesPerUniverse << " samples (" << sigma.size() << " distinct), " << out.size()
    << " formulas, " << failing << " fail re-verification, " << secs << " s";
  return {failing == 0 && !out.empty() && secs < kLockservSeconds, d.str()};
}

Verdict determinism(const Workdir& work) {
  struct Case {
    std::string name, config, traces;
  };
  std::vector<Case> cases = {{"toy", kSamples + "/toy.cfg", kSamples + "/toy.traces"},
                             {"lockserv", kSamples + "/lockserv.cfg", lockserv_traces(work)}};
  std::string detail;
  bool ok = true;
  for (const auto& c : cases) {
    std::string reference;
    for (int threads : {1, 4, 8}) {
      auto out = work(c.name + ".t" + std::to_string(threads));
      int code = cli("synth --config " + c.config + " --traces " + c.traces + " --threads " + std::to_string(threads) + " --out " + out);
      auto text = slurp(out);
      if (code != 0 || text.empty()) ok = false;
      if (threads == 1) reference = text;
      else ok &= text == reference;
    }
    detail += (detail.empty() ? "" : "; ") + c.name + " identical across 1/4/8 threads";
  }
  return {ok, ok ? detail : "outputs differ or synth failed"};
}

}  // namespace

int main() {
  Workdir work;
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"toy golden", toy_golden},
      {"oracle equivalence", oracle_equivalence},
      {"entailment soundness", entailment_soundness},
      {"slicing partition", slicing_partition},
      {"pruning neutrality", [&] { return pruning_neutrality(work); }},
      {"lockserv end-to-end", [&] { return lockserv_end_to_end(work); }},
      {"determinism", [&] { return determinism(work); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << "criterion " << i + 1 << " " << (v.pass ? "PASS" : "FAIL") << "  " << criteria[i].first << ": "
              << v.detail << std::endl;
  }
  return failed ? 1 : 0;
}
