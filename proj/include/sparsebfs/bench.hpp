#pragma once

#include "sparsebfs/baselines.hpp"
#include "sparsebfs/instances.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sparsebfs {

enum class Method { kBfs, kOmp, kIht, kHtp, kOracle };

std::string to_string(Method method);
Method parse_method(const std::string& name);

struct MethodOptions {
  Method method = Method::kBfs;
  double delta = 0.0;
  DualMethod subroutine = DualMethod::kPdal;
  bool warm_start = true;
  bool pruning = true;
};

struct OracleResult {
  Vector x;
  double objective = 0.0;
  long restricted_solves = 0;
};

/// Exhaustive search: restricted solves over every size-k support.
OracleResult exhaustive_oracle(const Instance& inst, const RestrictedOptions& opts = {});

/// Runs one method; the oracle reports C(d, k) solver calls.
SolveReport run_method(const Instance& inst, const MethodOptions& opts);

/// One line of a results CSV. Columns, in order:
///   instance_id, method, delta, objective, objective_error, solver_calls,
///   pruned, wall_ms, support, status, subroutine, warm_start, pruning,
///   reference_support
/// Supports are ';'-joined 0-based indices. objective_error and
/// reference_support are blank when unknown.
struct ResultRow {
  std::string instance_id;
  std::string method;
  double delta = 0.0;
  double objective = 0.0;
  std::optional<double> objective_error;
  long solver_calls = 0;
  long pruned = 0;
  double wall_ms = 0.0;
  Support support;
  std::string status = "ok";
  std::string subroutine = "pdal";
  bool warm_start = true;
  bool pruning = true;
  std::optional<Support> reference_support;

  bool ok() const { return status == "ok"; }
  bool operator==(const ResultRow&) const = default;
};

std::string csv_header();
std::string to_csv(const ResultRow& row);
ResultRow parse_csv_row(const std::string& line);

/// Appends a row, writing the header first when the file is new or empty.
void append_row(const std::filesystem::path& path, const ResultRow& row);
std::vector<ResultRow> read_rows(const std::filesystem::path& path);

std::string format_support(const Support& s);
Support parse_support(const std::string& text);

struct MetricSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for a single run
  long count = 0;
  bool operator==(const MetricSummary&) const = default;
};

/// Summary of every run sharing (method, delta, subroutine, warm_start, pruning).
struct AggregateRecord {
  std::string method;
  double delta = 0.0;
  std::string subroutine;
  bool warm_start = true;
  bool pruning = true;
  long runs = 0;
  long failures = 0;
  MetricSummary objective, objective_error, solver_calls, pruned, wall_ms;
  std::optional<double> pssr;  // over successful runs with a reference support
  bool operator==(const AggregateRecord&) const = default;
};

/// Groups rows in first-appearance order of their configuration.
std::vector<AggregateRecord> aggregate(const std::vector<ResultRow>& rows);

std::string aggregates_to_json(const std::vector<AggregateRecord>& records, int indent = 2);

struct BenchSpec {
  Family family = Family::kHuber;
  int d = 50;
  int k = 5;
  int n = 0;  // 0 selects ⌊10·k·ln d⌋
  std::vector<std::uint64_t> seeds;
  std::optional<double> lambda;
  std::optional<double> huber_delta;
  std::vector<MethodOptions> runs;
  bool with_oracle = false;  // exhaustive search per seed for objective_error
  int threads = 1;
};

struct BenchResult {
  std::vector<ResultRow> rows;
  std::vector<AggregateRecord> aggregates;
  long warnings = 0;  // failed runs
};

/// Generates each seeded instance and runs every configured method on it.
/// Rows come out in (seed, run) order regardless of thread count. The
/// reference support for PSSR is the generator's true support.
BenchResult run_bench(const BenchSpec& spec);

/// Row for a finished solve; objective_error is filled when oracle_objective is.
ResultRow make_row(const std::string& instance_id, const MethodOptions& opts, const SolveReport& rep,
                   std::optional<double> oracle_objective, std::optional<Support> reference);


}  // namespace sparsebfs
