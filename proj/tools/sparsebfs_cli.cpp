// sparsebfs: generate instances, run the exact search or a baseline, and
// write per-run CSV rows plus aggregate JSON.
//
// Exit codes: 0 success, 1 solver or I/O failure, 2 usage error.

#include "sparsebfs/bench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace sparsebfs;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

fs::path default_out_dir() {
  if (const char* env = std::getenv("SPARSEBFS_OUT_DIR"); env && *env) return env;
  return {};
}

fs::path manifest_file(const std::string& arg) {
  fs::path p(arg);
  if (fs::is_directory(p)) p /= "manifest.json";
  if (!fs::exists(p)) throw UsageError("manifest not found: " + p.string());
  return p;
}

fs::path oracle_file(const Manifest& m) { return m.dir / "oracle.json"; }

struct OracleRecord {
  double objective;
  Support support;
};

std::optional<OracleRecord> read_oracle(const Manifest& m) {
  std::ifstream in(oracle_file(m));
  if (!in) return std::nullopt;
  nlohmann::json j = nlohmann::json::parse(in);
  return OracleRecord{j.at("objective").get<double>(), j.at("support").get<Support>()};
}

// "3", "1,4,9", "1-100" or any comma list of those
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty()) continue;
    try {
      const auto dash = part.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(part));
        continue;
      }
      const std::uint64_t lo = std::stoull(part.substr(0, dash)), hi = std::stoull(part.substr(dash + 1));
      if (hi < lo) throw UsageError("empty seed range: " + part);
      for (std::uint64_t s = lo; s <= hi; ++s) out.push_back(s);
    } catch (const std::logic_error&) {
      throw UsageError("bad seed list: " + text);
    }
  }
  if (out.empty()) throw UsageError("seed list is empty");
  return out;
}

MethodOptions method_options(const std::string& method, double delta, const std::string& sub, bool warm,
                             bool prune) {
  MethodOptions o;
  try {
    o.method = parse_method(method);
    o.subroutine = parse_dual_method(sub);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (!(delta >= 0.0)) throw UsageError("--delta must be nonnegative");
  o.delta = delta;
  o.warm_start = warm;
  o.pruning = prune;
  return o;
}

void print_row(const ResultRow& r) { std::cout << csv_header() << '\n' << to_csv(r) << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact best-first search for sparse ridge-regularized estimation"};
  app.require_subcommand(1);

  // generate
  std::string family = "huber", out;
  int d = 0, k = 0, n = 0;
  std::uint64_t seed = 0;
  std::optional<double> lambda, huber_delta;
  auto* gen = app.add_subcommand("generate", "Write a synthetic instance (manifest.json, A.csv, b.csv, truth.json)");
  gen->add_option("--family", family, "huber or logistic")->check(CLI::IsMember({"huber", "logistic"}));
  gen->add_option("--d", d, "Number of features")->required()->check(CLI::PositiveNumber);
  gen->add_option("--k", k, "Sparsity level")->required()->check(CLI::PositiveNumber);
  gen->add_option("--n", n, "Number of samples (default floor(10 k ln d))")->check(CLI::NonNegativeNumber);
  gen->add_option("--seed", seed, "Generation seed");
  gen->add_option("--lambda", lambda, "Ridge weight")->check(CLI::PositiveNumber);
  gen->add_option("--delta", huber_delta, "Huber threshold")->check(CLI::PositiveNumber);
  gen->add_option("--out", out, "Output directory");

  // solve
  std::string manifest, method = "bfs", subroutine = "pdal";
  double delta = 0.0;
  bool no_warm = false, no_prune = false;
  auto* solve = app.add_subcommand("solve", "Run one method on an instance and append a CSV row");
  solve->add_option("--manifest", manifest, "Manifest file or instance directory")->required();
  solve->add_option("--method", method, "bfs, omp, iht, htp or oracle");
  solve->add_option("--delta", delta, "Optimality gap allowed for bfs");
  solve->add_option("--subroutine", subroutine, "Dual solver for bfs: pdal or sga");
  solve->add_flag("--no-warm-start", no_warm, "Cold-start every subtree solve");
  solve->add_flag("--no-pruning", no_prune, "Disable in-solver pruning");
  solve->add_option("--out", out, "Results CSV to append to");

  // oracle
  auto* oracle = app.add_subcommand("oracle", "Exhaustive search; writes oracle.json next to the manifest");
  oracle->add_option("--manifest", manifest, "Manifest file or instance directory")->required();
  oracle->add_option("--out", out, "Also append a CSV row here");

  // bench
  std::string seeds_text;
  std::vector<std::string> methods{"bfs"};
  std::vector<double> deltas{0.0};
  bool ablation = false, with_oracle = false;
  int threads = 1;
  auto* bench = app.add_subcommand("bench", "Run methods over seeded instances; writes runs.csv and aggregate.json");
  bench->add_option("--family", family, "huber or logistic")->check(CLI::IsMember({"huber", "logistic"}));
  bench->add_option("--d", d, "Number of features")->required()->check(CLI::PositiveNumber);
  bench->add_option("--k", k, "Sparsity level")->required()->check(CLI::PositiveNumber);
  bench->add_option("--n", n, "Number of samples (default floor(10 k ln d))")->check(CLI::NonNegativeNumber);
  bench->add_option("--seeds", seeds_text, "Seeds, e.g. 1-100 or 1,2,5")->required();
  bench->add_option("--method", methods, "Methods to run (repeatable)");
  bench->add_option("--delta", deltas, "Gaps for bfs (repeatable)");
  bench->add_option("--subroutine", subroutine, "Dual solver for bfs: pdal or sga");
  bench->add_flag("--ablation", ablation, "Run bfs with every warm-start/pruning combination");
  bench->add_option("--lambda", lambda, "Ridge weight")->check(CLI::PositiveNumber);
  bench->add_option("--huber-delta", huber_delta, "Huber threshold")->check(CLI::PositiveNumber);
  bench->add_flag("--with-oracle", with_oracle, "Exhaustive search per seed to fill objective_error");
  bench->add_option("--threads", threads, "Seeds solved concurrently")->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (out.empty()) out = default_out_dir().string();

    if (gen->parsed()) {
      if (out.empty()) throw UsageError("generate: --out is required");
      if (k > d) throw UsageError("--k must not exceed --d");
      GenSpec g = GenSpec::defaults(parse_family(family), d, k, n > 0 ? n : default_sample_size(d, k), seed);
      if (lambda) g.lambda = *lambda;
      if (huber_delta) g.delta = *huber_delta;
      const Manifest m = write_generated(out, g, generate(g));
      std::cout << (fs::path(out) / "manifest.json").string() << '\n';
      (void)m;
      return 0;
    }

    if (solve->parsed() || oracle->parsed()) {
      const Manifest m = read_manifest(manifest_file(manifest));
      const MethodOptions opts =
          oracle->parsed() ? method_options("oracle", 0.0, "pdal", true, true)
                           : method_options(method, delta, subroutine, !no_warm, !no_prune);
      if (!out.empty() && fs::is_directory(out)) out = (fs::path(out) / "results.csv").string();
      const Instance inst = load_instance(m);
      const std::optional<OracleRecord> known = read_oracle(m);
      std::optional<Support> reference = load_truth_support(m);
      if (!reference && known) reference = known->support;

      ResultRow row;
      int code = 0;
      try {
        const SolveReport rep = run_method(inst, opts);
        std::optional<double> ref_obj;
        if (oracle->parsed()) {
          ref_obj = rep.objective;
          nlohmann::ordered_json j;
          j["objective"] = rep.objective;
          j["support"] = support_of(rep.x);
          j["restricted_solves"] = rep.solver_calls;
          std::ofstream f(oracle_file(m));
          f << j.dump(2) << '\n';
          if (!f) throw std::runtime_error("cannot write " + oracle_file(m).string());
          if (!reference) reference = support_of(rep.x);
        } else if (known) {
          ref_obj = known->objective;
        }
        row = make_row(m.id, opts, rep, ref_obj, reference);
      } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        row = make_row(m.id, opts, SolveReport{}, std::nullopt, reference);
        row.objective = std::numeric_limits<double>::quiet_NaN();
        row.status = "error";
        code = 1;
      }
      if (out.empty())
        print_row(row);
      else
        append_row(out, row);
      return code;
    }

    if (bench->parsed()) {
      if (out.empty()) throw UsageError("bench: --out is required");
      if (k > d) throw UsageError("--k must not exceed --d");
      BenchSpec spec;
      spec.family = parse_family(family);
      spec.d = d;
      spec.k = k;
      spec.n = n;
      spec.seeds = parse_seeds(seeds_text);
      spec.lambda = lambda;
      spec.huber_delta = huber_delta;
      spec.with_oracle = with_oracle;
      spec.threads = threads;
      for (const std::string& name : methods) {
        if (name == "bfs") {
          for (double gap : deltas) {
            if (ablation) {
              for (bool warm : {true, false})
                for (bool prune : {true, false})
                  spec.runs.push_back(method_options(name, gap, subroutine, warm, prune));
            } else {
              spec.runs.push_back(method_options(name, gap, subroutine, true, true));
            }
          }
        } else {
          spec.runs.push_back(method_options(name, 0.0, subroutine, true, true));
        }
      }
      const BenchResult res = run_bench(spec);
      const fs::path dir(out);
      fs::create_directories(dir);
      {
        std::ofstream f(dir / "runs.csv");
        f << csv_header() << '\n';
        for (const ResultRow& r : res.rows) f << to_csv(r) << '\n';
        if (!f) throw std::runtime_error("cannot write " + (dir / "runs.csv").string());
      }
      {
        std::ofstream f(dir / "aggregate.json");
        f << aggregates_to_json(res.aggregates) << '\n';
        if (!f) throw std::runtime_error("cannot write " + (dir / "aggregate.json").string());
      }
      for (const AggregateRecord& a : res.aggregates) {
        std::cout << a.method;
        if (a.method == "bfs") std::cout << " delta=" << a.delta << " " << a.subroutine << " warm=" << a.warm_start
                                         << " prune=" << a.pruning;
        std::cout << "  runs=" << a.runs << " objective=" << a.objective.mean << " calls=" << a.solver_calls.mean
                  << " wall_ms=" << a.wall_ms.mean;
        if (a.pssr) std::cout << " pssr=" << *a.pssr;
        std::cout << '\n';
      }
      if (res.warnings > 0) std::cerr << "warning: " << res.warnings << " run(s) failed\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
