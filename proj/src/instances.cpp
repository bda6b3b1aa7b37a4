#include "sparsebfs/instances.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sparsebfs {
namespace {

constexpr double kHuberCorrelation = 0.2;
constexpr double kIllCorrelation = 0.5;
constexpr double kSignalToNoise = 10.0;
constexpr double kOutlierScale = 10.0;

enum Stream { kSupport = 0, kDesign = 1, kXNoise = 2, kBNoise = 3, kOutliers = 4, kLabels = 5, kIllBlock = 6 };

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Vector normal_vector(Rng& rng, int m) {
  Vector v(m);
  for (int i = 0; i < m; ++i) v[i] = rng.normal();
  return v;
}

std::filesystem::path resolve(const Manifest& m, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : m.dir / path;
}

}  // namespace

std::string to_string(Family family) { return family == Family::kHuber ? "huber" : "logistic"; }

Family parse_family(const std::string& name) {
  if (name == "huber") return Family::kHuber;
  if (name == "logistic") return Family::kLogistic;
  throw std::invalid_argument("unknown family: " + name);
}

GenSpec GenSpec::defaults(Family family, int d, int k, int n, std::uint64_t seed) {
  GenSpec s;
  s.family = family;
  s.d = d;
  s.k = k;
  s.n = n;
  s.seed = seed;
  s.lambda = family == Family::kHuber ? 1e-3 : 2e-4;
  s.delta = 1.0;
  return s;
}

int default_sample_size(int d, int k) {
  return static_cast<int>(std::floor(10.0 * k * std::log(static_cast<double>(d))));
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t stream_seed(std::uint64_t seed, int stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Support sample_subset(Rng& rng, int d, int k) {
  if (k < 0 || k > d) throw std::invalid_argument("sample_subset: need 0 <= k <= d");
  std::vector<int> pool(d);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(d - i)));
    std::swap(pool[i], pool[j]);
  }
  Support s(pool.begin(), pool.begin() + k);
  std::sort(s.begin(), s.end());
  return s;
}

Vector correlated_normal(Rng& rng, int m, double c) {
  const double shared = rng.normal();
  Vector v(m);
  const double a = std::sqrt(1.0 - c), b = std::sqrt(c);
  for (int i = 0; i < m; ++i) v[i] = a * rng.normal() + b * shared;
  return v;
}

void normalize_columns(Matrix& A) {
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double nrm = A.col(j).norm();
    if (nrm > 0) A.col(j) /= nrm;
  }
}

namespace {

void check_spec(const GenSpec& s) {
  if (s.d < 1 || s.n < 1 || s.k < 1 || s.k > s.d) throw std::invalid_argument("GenSpec: need n >= 1 and 1 <= k <= d");
  if (!(s.lambda > 0)) throw std::invalid_argument("GenSpec: lambda must be positive");
}

}  // namespace

GeneratedInstance gen_huber(const GenSpec& spec) {
  check_spec(spec);
  if (!(spec.delta > 0)) throw std::invalid_argument("gen_huber: delta must be positive");
  const int d = spec.d, n = spec.n, k = spec.k;

  Rng support_rng(stream_seed(spec.seed, kSupport));
  const Support truth = sample_subset(support_rng, d, k);
  Vector x_true = Vector::Zero(d);
  for (int i : truth) x_true[i] = 1.0;

  Rng design_rng(stream_seed(spec.seed, kDesign));
  Matrix A(n, d);
  for (int i = 0; i < n; ++i) A.row(i) = correlated_normal(design_rng, d, kHuberCorrelation).transpose();
  normalize_columns(A);

  Rng xnoise_rng(stream_seed(spec.seed, kXNoise));
  Vector x_noise = normal_vector(xnoise_rng, d);
  x_noise *= (x_true.norm() / kSignalToNoise) / x_noise.norm();

  const Vector b_clean = A * (x_true + x_noise);
  Rng bnoise_rng(stream_seed(spec.seed, kBNoise));
  Vector b_noise = normal_vector(bnoise_rng, n);
  b_noise *= (b_clean.norm() / kSignalToNoise) / b_noise.norm();

  Rng outlier_rng(stream_seed(spec.seed, kOutliers));
  Support outliers = sample_subset(outlier_rng, n, n / 10);
  for (int i : outliers) b_noise[i] *= kOutlierScale;

  Instance inst(std::move(A), Loss::huber(b_clean + b_noise, spec.delta), spec.lambda, k);
  return GeneratedInstance{std::move(inst), truth, std::move(x_true), std::move(x_noise), std::move(b_noise),
                           std::move(outliers), {}};
}

GeneratedInstance gen_logistic(const GenSpec& spec) {
  check_spec(spec);
  const int d = spec.d, n = spec.n, k = spec.k;

  Rng support_rng(stream_seed(spec.seed, kSupport));
  const Support truth = sample_subset(support_rng, d, k);
  Vector x_true = Vector::Zero(d);
  for (int i : truth) x_true[i] = 10.0;

  // Ŝ: ⌈k/2⌉ indices of the true support and ⌊k/2⌋ outside it.
  Rng block_rng(stream_seed(spec.seed, kIllBlock));
  Support outside;
  for (int i = 0; i < d; ++i)
    if (!std::binary_search(truth.begin(), truth.end(), i)) outside.push_back(i);
  const int from_truth = (k + 1) / 2;
  const int from_outside = std::min<int>(k / 2, static_cast<int>(outside.size()));
  Support block;
  for (int p : sample_subset(block_rng, k, from_truth)) block.push_back(truth[p]);
  for (int p : sample_subset(block_rng, static_cast<int>(outside.size()), from_outside)) block.push_back(outside[p]);
  std::sort(block.begin(), block.end());
  Support rest;
  for (int i = 0; i < d; ++i)
    if (!std::binary_search(block.begin(), block.end(), i)) rest.push_back(i);

  Rng design_rng(stream_seed(spec.seed, kDesign));
  Matrix A(n, d);
  const int block_size = static_cast<int>(block.size());
  const int rest_size = static_cast<int>(rest.size());
  for (int r = 0; r < n; ++r) {
    const Vector hi = correlated_normal(design_rng, block_size, kIllCorrelation);
    const Vector lo = correlated_normal(design_rng, rest_size, kHuberCorrelation);
    for (int c = 0; c < block_size; ++c) A(r, block[c]) = hi[c];
    for (int c = 0; c < rest_size; ++c) A(r, rest[c]) = lo[c];
  }
  normalize_columns(A);

  Rng label_rng(stream_seed(spec.seed, kLabels));
  const Vector margin = A * x_true;
  Vector b(n);
  for (int i = 0; i < n; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-margin[i]));
    b[i] = label_rng.uniform() < p ? 1.0 : -1.0;
  }

  Instance inst(std::move(A), Loss::logistic(std::move(b)), spec.lambda, k);
  return GeneratedInstance{std::move(inst), truth, std::move(x_true), {}, {}, {}, std::move(block)};
}

GeneratedInstance generate(const GenSpec& spec) {
  return spec.family == Family::kHuber ? gen_huber(spec) : gen_logistic(spec);
}

std::string instance_id(const GenSpec& spec) {
  return to_string(spec.family) + "-d" + std::to_string(spec.d) + "-k" + std::to_string(spec.k) + "-n" +
         std::to_string(spec.n) + "-s" + std::to_string(spec.seed);
}

double pssr(const std::vector<std::pair<Support, Support>>& results) {
  if (results.empty()) throw std::invalid_argument("pssr: empty result list");
  long hits = 0;
  for (const auto& [out, ref] : results)
    if (out == ref) ++hits;
  return 100.0 * static_cast<double>(hits) / static_cast<double>(results.size());
}

void write_csv_matrix(const std::filesystem::path& path, const Matrix& M) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
      if (j) out << ',';
      out << format_number(M(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Matrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ": not a number: '" + cell + "'");
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path.string() + ": ragged rows");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error(path.string() + ": empty file");
  Matrix M(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) M(i, j) = rows[i][j];
  return M;
}

Manifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read manifest " + path.string());
  const nlohmann::json j = nlohmann::json::parse(in);
  Manifest m;
  m.id = j.value("id", path.parent_path().filename().string());
  m.family = j.value("family", std::string("external"));
  m.loss = parse_loss_kind(j.value("loss", m.family == "external" ? std::string("quadratic") : m.family));
  m.d = j.at("d").get<int>();
  m.k = j.at("k").get<int>();
  m.n = j.at("n").get<int>();
  m.seed = j.value("seed", std::uint64_t{0});
  m.lambda = j.at("lambda").get<double>();
  m.delta = j.value("delta", 1.0);
  m.normalize = j.value("normalize_columns", false);
  if (j.contains("paths")) {
    const auto& p = j.at("paths");
    m.A_path = p.value("A", m.A_path);
    m.b_path = p.value("b", m.b_path);
    m.truth_path = p.value("truth", std::string{});
  }
  m.dir = path.parent_path();
  return m;
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  nlohmann::ordered_json j;
  j["id"] = m.id;
  j["family"] = m.family;
  j["loss"] = std::string(to_string(m.loss));
  j["d"] = m.d;
  j["k"] = m.k;
  j["n"] = m.n;
  j["seed"] = m.seed;
  j["lambda"] = m.lambda;
  j["delta"] = m.delta;
  j["normalize_columns"] = m.normalize;
  j["paths"] = {{"A", m.A_path}, {"b", m.b_path}};
  if (!m.truth_path.empty()) j["paths"]["truth"] = m.truth_path;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

Instance load_instance(const Manifest& m) {
  Matrix A = read_csv_matrix(resolve(m, m.A_path));
  const Matrix bm = read_csv_matrix(resolve(m, m.b_path));
  if (bm.cols() != 1) throw std::runtime_error("b must be a single column");
  if (A.rows() != bm.rows()) throw std::runtime_error("A and b row counts differ");
  if (A.rows() != m.n || A.cols() != m.d)
    throw std::runtime_error("A is " + std::to_string(A.rows()) + "x" + std::to_string(A.cols()) + " but the manifest says n=" +
                             std::to_string(m.n) + ", d=" + std::to_string(m.d));
  if (m.normalize) normalize_columns(A);
  Vector b = bm.col(0);
  Loss loss = m.loss == LossKind::kHuber      ? Loss::huber(std::move(b), m.delta)
              : m.loss == LossKind::kLogistic ? Loss::logistic(std::move(b))
                                              : Loss::quadratic(std::move(b));
  return Instance(std::move(A), std::move(loss), m.lambda, m.k);
}

std::optional<Support> load_truth_support(const Manifest& m) {
  if (m.truth_path.empty()) return std::nullopt;
  const auto path = resolve(m, m.truth_path);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  const nlohmann::json j = nlohmann::json::parse(in);
  return j.at("support").get<Support>();
}

Manifest write_generated(const std::filesystem::path& dir, const GenSpec& spec, const GeneratedInstance& g) {
  std::filesystem::create_directories(dir);
  Manifest m;
  m.id = instance_id(spec);
  m.family = to_string(spec.family);
  m.loss = g.inst.loss.kind();
  m.d = spec.d;
  m.k = spec.k;
  m.n = spec.n;
  m.seed = spec.seed;
  m.lambda = spec.lambda;
  m.delta = spec.delta;
  m.truth_path = "truth.json";
  m.dir = dir;

  write_csv_matrix(dir / m.A_path, g.inst.A);
  write_csv_matrix(dir / m.b_path, g.inst.loss.b());
  nlohmann::ordered_json truth;
  truth["support"] = g.true_support;
  truth["x_true"] = std::vector<double>(g.x_true.begin(), g.x_true.end());
  truth["outliers"] = g.outliers;
  if (!g.ill_block.empty()) truth["ill_block"] = g.ill_block;
  std::ofstream out(dir / m.truth_path);
  if (!out) throw std::runtime_error("cannot write " + (dir / m.truth_path).string());
  out << truth.dump(2) << '\n';
  write_manifest(dir / "manifest.json", m);
  return m;
}

}  // namespace sparsebfs
