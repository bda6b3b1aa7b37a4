#pragma once

#include "sparsebfs/restricted.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace sparsebfs {

enum class Family { kHuber, kLogistic };

std::string to_string(Family family);
Family parse_family(const std::string& name);

struct GenSpec {
  Family family = Family::kHuber;
  int d = 50;
  int k = 5;
  int n = 100;
  std::uint64_t seed = 0;
  double lambda = 1e-3;
  double delta = 1.0;  // Huber threshold

  /// Defaults per family: Huber λ = 1e-3, δ = 1; logistic λ = 2e-4.
  static GenSpec defaults(Family family, int d, int k, int n, std::uint64_t seed);
};

/// n = ⌊10·k·ln d⌋, the sample size used for the synthetic sweeps.
int default_sample_size(int d, int k);

struct GeneratedInstance {
  Instance inst;
  Support true_support;
  Vector x_true;
  // Huber only: coefficient noise, observation noise (after outlier scaling)
  // and the rows whose observation noise was scaled by 10.
  Vector x_noise;
  Vector b_noise;
  Support outliers;
  Support ill_block;  // logistic only: the strongly correlated columns
};

/// Seeded random source used by the generators. Portable: built on
/// std::mt19937_64 (whose output sequence is fixed by the standard) with
/// hand-rolled uniform/normal transforms, since the std distributions are
/// implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform();               // [0, 1), 53 random bits
  double normal();                // Box–Muller, one draw per call
  std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)

 private:
  std::mt19937_64 engine_;
};

/// Seed of the named sub-stream of a generation seed (splitmix64 mix of
/// seed and stream number). Streams in order: 0 support, 1 design matrix,
/// 2 x_noise, 3 b_noise, 4 outlier positions, 5 labels, 6 ill-conditioned
/// block selection.
std::uint64_t stream_seed(std::uint64_t seed, int stream);

/// Uniformly random size-k subset of {0, …, d−1}, sorted.
Support sample_subset(Rng& rng, int d, int k);

/// Row of an m-dimensional normal with unit variances and constant pairwise
/// correlation c, via the one-factor form sqrt(1−c)·z + sqrt(c)·w·1.
Vector correlated_normal(Rng& rng, int m, double c);

/// Sparse regression with Gaussian noise and 10% gross outliers, Huber loss.
GeneratedInstance gen_huber(const GenSpec& spec);

/// Ill-conditioned sparse logistic regression with ±1 labels.
GeneratedInstance gen_logistic(const GenSpec& spec);

GeneratedInstance generate(const GenSpec& spec);

/// "<family>-d<d>-k<k>-n<n>-s<seed>"
std::string instance_id(const GenSpec& spec);

/// Percentage of pairs whose supports match exactly.
double pssr(const std::vector<std::pair<Support, Support>>& results);

// ---- File formats -------------------------------------------------------

/// Headerless comma-separated numbers, one row per line, written with 17
/// significant digits so a reload is bit-exact.
void write_csv_matrix(const std::filesystem::path& path, const Matrix& M);
Matrix read_csv_matrix(const std::filesystem::path& path);

/// Scales each nonzero column to unit ℓ2 norm.
void normalize_columns(Matrix& A);

/// Instance manifest (JSON):
///   {"id", "family": "huber"|"logistic"|"external", "loss", "d", "k", "n",
///    "seed", "lambda", "delta", "normalize_columns",
///    "paths": {"A": ..., "b": ..., "truth": ...}}
/// Relative paths resolve against the manifest's directory.
struct Manifest {
  std::string id;
  std::string family;
  LossKind loss = LossKind::kHuber;
  int d = 0, k = 0, n = 0;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  double delta = 1.0;
  bool normalize = false;
  std::string A_path = "A.csv";
  std::string b_path = "b.csv";
  std::string truth_path;  // empty when no ground truth is known
  std::filesystem::path dir;  // directory the manifest was loaded from
};

Manifest read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const Manifest& m);

/// Builds the instance described by a manifest, loading A and b from CSV.
Instance load_instance(const Manifest& m);
std::optional<Support> load_truth_support(const Manifest& m);

/// Writes manifest.json, A.csv, b.csv and truth.json into dir.
Manifest write_generated(const std::filesystem::path& dir, const GenSpec& spec, const GeneratedInstance& g);

}  // namespace sparsebfs
