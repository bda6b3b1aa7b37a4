#include "sparsebfs/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace sparsebfs {
namespace {

constexpr int kColumns = 14;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("bad boolean: " + s);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

MetricSummary summarize(const std::vector<double>& xs) {
  MetricSummary m;
  m.count = static_cast<long>(xs.size());
  if (xs.empty()) return m;
  double sum = 0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0;
    for (double x : xs) sq += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return m;
}

nlohmann::ordered_json summary_json(const MetricSummary& m) {
  nlohmann::ordered_json j;
  j["mean"] = m.mean;
  j["std"] = m.std;
  j["count"] = m.count;
  return j;
}

}  // namespace

std::string to_string(Method method) {
  switch (method) {
    case Method::kBfs: return "bfs";
    case Method::kOmp: return "omp";
    case Method::kIht: return "iht";
    case Method::kHtp: return "htp";
    case Method::kOracle: return "oracle";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "bfs") return Method::kBfs;
  if (name == "omp") return Method::kOmp;
  if (name == "iht") return Method::kIht;
  if (name == "htp") return Method::kHtp;
  if (name == "oracle") return Method::kOracle;
  throw std::invalid_argument("unknown method: " + name);
}

OracleResult exhaustive_oracle(const Instance& inst, const RestrictedOptions& opts) {
  const int d = inst.d(), k = inst.k;
  OracleResult best;
  best.objective = std::numeric_limits<double>::infinity();
  Support S(k);
  for (int i = 0; i < k; ++i) S[i] = i;
  for (;;) {
    const RestrictedSolution sol = solve_restricted(inst, S, opts);
    ++best.restricted_solves;
    if (sol.value < best.objective) {
      best.objective = sol.value;
      best.x = sol.x;
    }
    int i = k - 1;
    while (i >= 0 && S[i] == d - k + i) --i;
    if (i < 0) break;
    ++S[i];
    for (int j = i + 1; j < k; ++j) S[j] = S[j - 1] + 1;
  }
  return best;
}

SolveReport run_method(const Instance& inst, const MethodOptions& opts) {
  switch (opts.method) {
    case Method::kBfs: {
      BfsOptions o;
      o.delta = opts.delta;
      o.solver.method = opts.subroutine;
      o.solver.warm_start = opts.warm_start;
      o.solver.pruning = opts.pruning;
      return bfs_solve(inst, o);
    }
    case Method::kOmp:
      return omp(inst);
    case Method::kIht:
      return iht(inst);
    case Method::kHtp:
      return htp(inst);
    case Method::kOracle: {
      const auto start = std::chrono::steady_clock::now();
      OracleResult o = exhaustive_oracle(inst);
      SolveReport rep;
      rep.x = std::move(o.x);
      rep.objective = o.objective;
      rep.solver_calls = o.restricted_solves;
      rep.wall_time = std::chrono::steady_clock::now() - start;
      return rep;
    }
  }
  throw std::invalid_argument("run_method: unknown method");
}

std::string format_support(const Support& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(s[i]);
  }
  return out;
}

Support parse_support(const std::string& text) {
  Support s;
  if (text.empty()) return s;
  for (const std::string& part : split(text, ';')) s.push_back(std::stoi(part));
  return s;
}

std::string csv_header() {
  return "instance_id,method,delta,objective,objective_error,solver_calls,pruned,wall_ms,support,status,"
         "subroutine,warm_start,pruning,reference_support";
}

std::string to_csv(const ResultRow& r) {
  if (r.instance_id.find(',') != std::string::npos) throw std::invalid_argument("instance_id may not contain ','");
  std::string s;
  s += r.instance_id + ',' + r.method + ',' + fmt(r.delta) + ',' + fmt(r.objective) + ',';
  s += (r.objective_error ? fmt(*r.objective_error) : std::string{}) + ',';
  s += std::to_string(r.solver_calls) + ',' + std::to_string(r.pruned) + ',' + fmt(r.wall_ms) + ',';
  s += format_support(r.support) + ',' + r.status + ',' + r.subroutine + ',';
  s += std::string(r.warm_start ? "true" : "false") + ',' + (r.pruning ? "true" : "false") + ',';
  s += r.reference_support ? format_support(*r.reference_support) : std::string{};
  return s;
}

ResultRow parse_csv_row(const std::string& line) {
  std::vector<std::string> f = split(line, ',');
  if (static_cast<int>(f.size()) != kColumns)
    throw std::invalid_argument("results row has " + std::to_string(f.size()) + " fields, expected " +
                                std::to_string(kColumns));
  ResultRow r;
  r.instance_id = f[0];
  r.method = f[1];
  r.delta = parse_double(f[2]);
  r.objective = parse_double(f[3]);
  if (!f[4].empty()) r.objective_error = parse_double(f[4]);
  r.solver_calls = std::stol(f[5]);
  r.pruned = std::stol(f[6]);
  r.wall_ms = parse_double(f[7]);
  r.support = parse_support(f[8]);
  r.status = f[9];
  r.subroutine = f[10];
  r.warm_start = parse_bool(f[11]);
  r.pruning = parse_bool(f[12]);
  // An empty reference field means "unknown"; an empty support is never a
  // meaningful reference.
  if (!f[13].empty()) r.reference_support = parse_support(f[13]);
  return r;
}

void append_row(const std::filesystem::path& path, const ResultRow& row) {
  const bool fresh = !std::filesystem::exists(path) || std::filesystem::file_size(path) == 0;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::app);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (fresh) out << csv_header() << '\n';
  out << to_csv(row) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<ResultRow> read_rows(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<ResultRow> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line == csv_header()) continue;
    }
    rows.push_back(parse_csv_row(line));
  }
  return rows;
}

ResultRow make_row(const std::string& id, const MethodOptions& opts, const SolveReport& rep,
                   std::optional<double> oracle_objective, std::optional<Support> reference) {
  ResultRow r;
  r.instance_id = id;
  r.method = to_string(opts.method);
  r.delta = opts.method == Method::kBfs ? opts.delta : 0.0;
  r.objective = rep.objective;
  if (oracle_objective) r.objective_error = rep.objective - *oracle_objective;
  r.solver_calls = rep.solver_calls;
  r.pruned = rep.pruned;
  r.wall_ms = rep.wall_time.count() * 1e3;
  r.support = support_of(rep.x);
  r.status = "ok";
  r.subroutine = std::string(to_string(opts.subroutine));
  r.warm_start = opts.warm_start;
  r.pruning = opts.pruning;
  r.reference_support = std::move(reference);
  return r;
}

std::vector<AggregateRecord> aggregate(const std::vector<ResultRow>& rows) {
  using Key = std::tuple<std::string, double, std::string, bool, bool>;
  std::vector<Key> order;
  std::map<Key, std::vector<const ResultRow*>> groups;
  for (const ResultRow& r : rows) {
    Key key{r.method, r.delta, r.subroutine, r.warm_start, r.pruning};
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::vector<AggregateRecord> out;
  for (const Key& key : order) {
    AggregateRecord a;
    std::tie(a.method, a.delta, a.subroutine, a.warm_start, a.pruning) = key;
    std::vector<double> obj, err, calls, pruned, wall;
    std::vector<std::pair<Support, Support>> recovery;
    for (const ResultRow* r : groups[key]) {
      ++a.runs;
      if (!r->ok()) {
        ++a.failures;
        continue;
      }
      obj.push_back(r->objective);
      if (r->objective_error) err.push_back(*r->objective_error);
      calls.push_back(static_cast<double>(r->solver_calls));
      pruned.push_back(static_cast<double>(r->pruned));
      wall.push_back(r->wall_ms);
      if (r->reference_support) recovery.emplace_back(r->support, *r->reference_support);
    }
    a.objective = summarize(obj);
    a.objective_error = summarize(err);
    a.solver_calls = summarize(calls);
    a.pruned = summarize(pruned);
    a.wall_ms = summarize(wall);
    if (!recovery.empty()) a.pssr = pssr(recovery);
    out.push_back(std::move(a));
  }
  return out;
}

std::string aggregates_to_json(const std::vector<AggregateRecord>& records, int indent) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const AggregateRecord& a : records) {
    nlohmann::ordered_json j;
    j["method"] = a.method;
    j["delta"] = a.delta;
    j["subroutine"] = a.subroutine;
    j["warm_start"] = a.warm_start;
    j["pruning"] = a.pruning;
    j["runs"] = a.runs;
    j["failures"] = a.failures;
    j["objective"] = summary_json(a.objective);
    j["objective_error"] = summary_json(a.objective_error);
    j["solver_calls"] = summary_json(a.solver_calls);
    j["pruned"] = summary_json(a.pruned);
    j["wall_ms"] = summary_json(a.wall_ms);
    j["pssr"] = a.pssr ? nlohmann::ordered_json(*a.pssr) : nlohmann::ordered_json(nullptr);
    arr.push_back(std::move(j));
  }
  nlohmann::ordered_json root;
  root["records"] = std::move(arr);
  return root.dump(indent);
}

BenchResult run_bench(const BenchSpec& spec) {
  if (spec.seeds.empty()) throw std::invalid_argument("run_bench: no seeds");
  if (spec.runs.empty()) throw std::invalid_argument("run_bench: no methods");
  const int n = spec.n > 0 ? spec.n : default_sample_size(spec.d, spec.k);

  auto one_seed = [&](std::uint64_t seed) {
    GenSpec g = GenSpec::defaults(spec.family, spec.d, spec.k, n, seed);
    if (spec.lambda) g.lambda = *spec.lambda;
    if (spec.huber_delta) g.delta = *spec.huber_delta;
    const GeneratedInstance gen = generate(g);
    const std::string id = instance_id(g);
    std::optional<double> oracle_obj;
    if (spec.with_oracle) oracle_obj = exhaustive_oracle(gen.inst).objective;
    std::vector<ResultRow> rows;
    for (const MethodOptions& m : spec.runs) {
      try {
        rows.push_back(make_row(id, m, run_method(gen.inst, m), oracle_obj, gen.true_support));
      } catch (const std::exception&) {
        ResultRow r = make_row(id, m, SolveReport{}, std::nullopt, gen.true_support);
        r.objective = std::numeric_limits<double>::quiet_NaN();
        r.support.clear();
        r.status = "error";
        rows.push_back(std::move(r));
      }
    }
    return rows;
  };

  std::vector<std::vector<ResultRow>> per_seed(spec.seeds.size());
  const std::size_t threads = static_cast<std::size_t>(std::max(1, spec.threads));
  for (std::size_t base = 0; base < spec.seeds.size(); base += threads) {
    std::vector<std::future<std::vector<ResultRow>>> batch;
    const std::size_t end = std::min(spec.seeds.size(), base + threads);
    for (std::size_t i = base; i < end; ++i)
      batch.push_back(std::async(threads > 1 ? std::launch::async : std::launch::deferred, one_seed, spec.seeds[i]));
    for (std::size_t i = base; i < end; ++i) per_seed[i] = batch[i - base].get();
  }

  BenchResult out;
  for (auto& rows : per_seed)
    for (auto& r : rows) {
      if (!r.ok()) ++out.warnings;
      out.rows.push_back(std::move(r));
    }
  out.aggregates = aggregate(out.rows);
  return out;
}

}  // namespace sparsebfs
