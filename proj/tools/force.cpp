// force: invariant synthesis from sampled protocol states.
//
//   force synth       --config C --traces T --out O [--format text|filter] [--no-distinct]
//                     [--threads N] [--stats S]
//   force check       --config C --traces T --formulas F
//   force gen-traces  --protocol lockserv|random [--config C] --universe node=2,lock=1 ...
//                     [--steps N] [--samples N] [--seed N] [--density P] [--out O]
//   force oracle-diff --config C --traces T [--universe-bound K]
//
// Exit codes: 0 success, 1 negative verdict, 2 usage error, 3 input error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "force/force.hpp"

namespace {

using namespace force;

constexpr int kVerdictFailed = 1;
constexpr int kUsage = 2;
constexpr int kInputError = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error("cannot write '" + path + "'");
}

// Parse errors name the file they came from.
template <class F>
auto parsing(const std::string& path, F&& f) {
  try {
    return f(read_file(path));
  } catch (const ParseError& e) {
    throw Error(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.message());
  }
}

unsigned default_threads() {
  if (const char* env = std::getenv("FORCE_THREADS")) {
    char* end = nullptr;
    unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n >= 1 && n <= 1024) return static_cast<unsigned>(n);
    std::cerr << "warning: ignoring FORCE_THREADS='" << env << "'\n";
  }
  return 1;
}

struct Inputs {
  std::string config, traces;
  bool no_distinct = false;

  SearchSpec spec() const {
    auto s = parsing(config, [](const std::string& t) { return io::parse_config(t); });
    if (no_distinct) s.distinct = false;
    return s;
  }
  std::vector<Structure> structures(const SearchSpec& spec) const {
    return parsing(traces, [&](const std::string& t) { return io::parse_traces(t, spec.signature); });
  }
};

nlohmann::json stats_json(const SynthesisResult& r) {
  using nlohmann::json;
  auto slice = [](const SliceStats& s) {
    return json{{"n_exists", s.params.n_exists}, {"t_vars", s.params.t_vars}, {"t_lits", s.params.t_lits},
                {"phase", s.clause_phase ? "clause" : "dnf"}, {"level", s.level},
                {"generated", s.generated}, {"filtered", s.filtered}, {"blocked", s.blocked},
                {"tested", s.tested}, {"satisfied", s.satisfied}, {"seconds", s.seconds}};
  };
  json slices = json::array();
  for (const auto& s : r.stats.slices) slices.push_back(slice(s));
  auto t = r.stats.totals();
  return json{{"structures", r.stats.structures},
              {"clauses", r.clauses.size()},
              {"phi_c", r.phi_c.size()},
              {"phi_f", r.phi_f.size()},
              {"seconds", {{"clause", r.stats.clause_seconds}, {"dnf", r.stats.dnf_seconds},
                           {"minimize", r.stats.minimize_seconds}}},
              {"totals", {{"generated", t.generated}, {"filtered", t.filtered}, {"blocked", t.blocked},
                          {"tested", t.tested}, {"satisfied", t.satisfied}}},
              {"slices", slices},
              {"warnings", r.warnings}};
}

std::vector<int> parse_universe(const Signature& sig, const std::string& text) {
  std::vector<int> sizes(static_cast<std::size_t>(sig.num_sorts()), 0);
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("universe entry '" + item + "' is not sort=size");
    auto s = sig.find_sort(item.substr(0, eq));
    if (!s) throw Error("universe names unknown sort '" + item.substr(0, eq) + "'");
    int n = 0;
    try {
      n = std::stoi(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error("universe size in '" + item + "' is not a number");
    }
    if (n < 1) throw Error("universe sizes must be positive");
    sizes[*s] = n;
  }
  for (int s = 0; s < sig.num_sorts(); ++s)
    if (!sizes[s]) throw Error("universe '" + text + "' misses sort '" + sig.sort(s).name + "'");
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"force: first-order invariant synthesis from sampled states"};
  app.require_subcommand(1);

  Inputs in;
  std::string out_path, format = "text", stats_path, formulas_path;
  unsigned threads = default_threads();
  bool no_dnf_filter = false, no_blocking = false;

  auto* synth = app.add_subcommand("synth", "synthesize invariants satisfied by every sample");
  synth->add_option("--config", in.config, "search-space config")->required();
  synth->add_option("--traces", in.traces, "trace document")->required();
  synth->add_option("--out", out_path, "output path ('-' for stdout)")->required();
  synth->add_option("--format", format, "text: all formulas; filter: clause filter")->check(CLI::IsMember({"text", "filter"}));
  synth->add_flag("--no-distinct", in.no_distinct, "standard instead of distinct quantification");
  synth->add_option("--threads", threads, "worker threads (default FORCE_THREADS or 1)")->check(CLI::Range(1u, 1024u));
  synth->add_option("--stats", stats_path, "write per-slice counters as JSON");
  synth->add_flag("--no-dnf-filter", no_dnf_filter)->group("");
  synth->add_flag("--no-blocking", no_blocking)->group("");

  auto* check = app.add_subcommand("check", "evaluate formulas on every sample");
  check->add_option("--config", in.config)->required();
  check->add_option("--traces", in.traces)->required();
  check->add_option("--formulas", formulas_path)->required();
  check->add_flag("--no-distinct", in.no_distinct);

  std::string protocol;
  std::vector<std::string> universes;
  int steps = 20, samples = 100;
  std::uint64_t seed = 0;
  double density = 0.5;
  auto* gen = app.add_subcommand("gen-traces", "sample protocol states");
  gen->add_option("--protocol", protocol)->required()->check(CLI::IsMember({"lockserv", "random"}));
  gen->add_option("--config", in.config, "signature source (required for random)");
  gen->add_option("--universe", universes, "sort sizes, e.g. node=2,lock=1; repeatable")->required();
  gen->add_option("--steps", steps, "steps per run")->check(CLI::NonNegativeNumber);
  gen->add_option("--samples", samples, "samples per universe")->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed);
  gen->add_option("--density", density, "tuple probability for random models")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--out", out_path, "output path ('-' for stdout)");

  int bound = 1;
  auto* diff = app.add_subcommand("oracle-diff", "compare synth against the exhaustive oracle");
  diff->add_option("--config", in.config)->required();
  diff->add_option("--traces", in.traces)->required();
  diff->add_option("--universe-bound", bound, "compare on sizes budget..budget+K per sort")->check(CLI::Range(0, 4));
  diff->add_flag("--no-distinct", in.no_distinct);
  diff->add_option("--threads", threads)->check(CLI::Range(1u, 1024u));
  diff->add_flag("--no-dnf-filter", no_dnf_filter)->group("");
  diff->add_flag("--no-blocking", no_blocking)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  SynthesisOptions options;
  options.threads = threads;
  options.dnf_modulo_clauses = !no_dnf_filter;
  options.satisfied_blocking = !no_blocking;

  try {
    if (*synth) {
      auto spec = in.spec();
      auto sigma = in.structures(spec);
      auto result = synthesize(spec, sigma, options);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
      write_file(out_path, format == "filter" ? io::export_clause_filter(spec, result.clauses)
                                              : io::print_formulas(spec, result.formulas()));
      if (!stats_path.empty()) write_file(stats_path, stats_json(result).dump(2) + "\n");
      return 0;
    }

    if (*check) {
      auto spec = in.spec();
      auto sigma = in.structures(spec);
      auto fs = parsing(formulas_path, [&](const std::string& t) { return io::parse_formulas(t, spec); });
      if (fs.empty()) std::cerr << "warning: '" << formulas_path << "' contains no formulas\n";
      bool all = true;
      for (const auto& f : fs) {
        std::size_t failed_at = sigma.size();
        Evaluator eval(spec.signature, f);
        for (std::size_t i = 0; i < sigma.size() && failed_at == sigma.size(); ++i)
          if (!eval(sigma[i])) failed_at = i;
        bool ok = failed_at == sigma.size();
        all &= ok;
        std::cout << (ok ? "ok      " : "FAILED  ") << io::print_formula(spec, f);
        if (!ok) std::cout << "  (sample " << failed_at << ")";
        std::cout << "\n";
      }
      return all ? 0 : kVerdictFailed;
    }

    if (*gen) {
      SearchSpec spec;
      if (!in.config.empty()) spec = in.spec();
      else if (protocol == "lockserv") spec = lockserv_spec();
      else throw Error("--protocol random needs --config");
      std::vector<Structure> ms;
      std::vector<std::string> labels;
      for (std::size_t u = 0; u < universes.size(); ++u) {
        auto sizes = parse_universe(spec.signature, universes[u]);
        std::uint64_t s = seed + u;
        std::vector<Sample> got;
        if (protocol == "lockserv") {
          auto node = *spec.signature.find_sort("node"), lock = *spec.signature.find_sort("lock");
          got = LockservSim(spec.signature, sizes[node], sizes[lock]).run(steps, samples, s);
        } else {
          got = random_models(spec.signature, sizes, samples, density, s);
        }
        for (auto& g : got) {
          ms.push_back(std::move(g.state));
          labels.push_back(std::move(g.label));
        }
      }
      write_file(out_path, io::print_traces(spec.signature, ms, labels));
      return 0;
    }

    if (*diff) {
      auto spec = in.spec();
      auto sigma = in.structures(spec);
      auto mine = synthesize(spec, sigma, options).formulas();
      OracleOptions oo;
      oo.universe_extra = bound;
      auto oracle = brute_force_oracle(spec, sigma, oo);
      auto sem = BoundedSemantics::for_spec(spec, bound, oo.max_bits);
      bool same = sem.conjunction(mine) == sem.conjunction(oracle.formulas);
      std::cout << (same ? "equivalent" : "NOT equivalent") << ": force " << mine.size() << " formulas, oracle "
                << oracle.formulas.size() << " formulas, " << sem.structures().size() << " structures compared\n";
      if (!same) {
        for (const auto& f : oracle.formulas)
          if (!BoundedSemantics::subset(sem.conjunction(mine), sem.truth(f)))
            std::cout << "  oracle only: " << io::print_formula(spec, f) << "\n";
        for (const auto& f : mine)
          if (!BoundedSemantics::subset(sem.conjunction(oracle.formulas), sem.truth(f)))
            std::cout << "  force only:  " << io::print_formula(spec, f) << "\n";
      }
      return same ? 0 : kVerdictFailed;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kUsage;
}
