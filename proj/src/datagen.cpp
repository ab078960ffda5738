#include "assd/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "assd/csv_io.hpp"
#include "assd/rng.hpp"

namespace assd::datagen {

namespace {

enum Stream : std::uint64_t { kMatrixStream = 1, kCoeffStream = 2, kNoiseStream = 3, kSubsampleStream = 4 };

DenseMatrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix m(rows, cols);
  // Row-by-row fill so a row's values do not depend on the column count order.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

IndexList sample_without_replacement(Index population, Index count, Rng& rng) {
  IndexList pool(static_cast<std::size_t>(population));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Index> pick(i, population - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

DenseMatrix subsample(const DenseMatrix& source, Index n, Index p, std::uint64_t seed) {
  if (source.rows() < n || source.cols() < p) {
    throw InputError("csv matrix is " + std::to_string(source.rows()) + "x" +
                     std::to_string(source.cols()) + ", smaller than requested " + std::to_string(n) +
                     "x" + std::to_string(p));
  }
  Rng rng(derive_seed(seed, {kSubsampleStream}));
  const IndexList rows = sample_without_replacement(source.rows(), n, rng);
  const IndexList cols = sample_without_replacement(source.cols(), p, rng);
  DenseMatrix out(n, p);
  for (Index j = 0; j < p; ++j)
    for (Index i = 0; i < n; ++i) out(i, j) = source(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  return out;
}

}  // namespace

void MatrixSpec::validate() const {
  if (n < 1 || p < 1) throw InputError("matrix dimensions must be positive");
  if (const auto* ar = std::get_if<Ar1Gaussian>(&family)) {
    if (!(ar->pi >= 0.0 && ar->pi < 1.0)) throw InputError("ar1 correlation pi must lie in [0, 1)");
  }
  if (const auto* st = std::get_if<Structured>(&family)) {
    if (st->rank < 1) throw InputError("structured rank must be >= 1");
  }
  if (const auto* csv = std::get_if<CsvFile>(&family)) {
    if (csv->path.empty() && !csv->cache) throw InputError("csv matrix family needs a path");
  }
}

void preload(MatrixSpec& spec) {
  if (auto* csv = std::get_if<CsvFile>(&spec.family)) {
    if (!csv->cache) csv->cache = std::make_shared<const DenseMatrix>(csv::read_matrix(csv->path));
  }
}

void CoeffSpec::validate(Index p) const {
  if (s0 < 0 || s0 > p) throw InputError("s0 = " + std::to_string(s0) + " must lie in [0, p]");
  if (!(lo < hi)) throw InputError("coefficient range needs lo < hi");
  if (!(tail_value >= 0.0)) throw InputError("tail_value must be nonnegative");
}

InstanceSeeds InstanceSeeds::from_master(std::uint64_t master) {
  return {derive_seed(master, {kMatrixStream}), derive_seed(master, {kCoeffStream}),
          derive_seed(master, {kNoiseStream})};
}

void standardize_columns(DenseMatrix& X) {
  const double n = static_cast<double>(X.rows());
  for (Index j = 0; j < X.cols(); ++j) {
    auto col = X.col(j);
    col.array() -= col.mean();
    if (X.rows() > 1) {
      const double sd = std::sqrt(col.squaredNorm() / (n - 1.0));
      if (sd > 0.0) col /= sd;
    }
  }
}

DenseMatrix gen_matrix(const MatrixSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  return std::visit(
      [&](const auto& fam) -> DenseMatrix {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, IidGaussian>) {
          return gaussian(spec.n, spec.p, rng);
        } else if constexpr (std::is_same_v<F, Ar1Gaussian>) {
          std::normal_distribution<double> normal(0.0, 1.0);
          const double innovation = std::sqrt(1.0 - fam.pi * fam.pi);
          DenseMatrix m(spec.n, spec.p);
          for (Index i = 0; i < spec.n; ++i) {
            double prev = normal(rng);
            m(i, 0) = prev;
            for (Index j = 1; j < spec.p; ++j) {
              prev = fam.pi * prev + innovation * normal(rng);
              m(i, j) = prev;
            }
          }
          return m;
        } else if constexpr (std::is_same_v<F, Structured>) {
          const DenseMatrix left = gaussian(spec.n, fam.rank, rng);
          const DenseMatrix right = gaussian(fam.rank, spec.p, rng);
          return left * right;
        } else {
          DenseMatrix m = fam.cache ? subsample(*fam.cache, spec.n, spec.p, seed)
                                    : subsample(csv::read_matrix(fam.path), spec.n, spec.p, seed);
          if (fam.standardize) standardize_columns(m);
          return m;
        }
      },
      spec.family);
}

Coefficients gen_coeffs(const CoeffSpec& spec, Index p, std::uint64_t seed) {
  spec.validate(p);
  Rng rng(seed);
  Coefficients out;
  out.support = sample_without_replacement(p, spec.s0, rng);
  out.beta = Vector::Constant(p, spec.law == CoeffLaw::weak_sparse ? spec.tail_value : 0.0);
  std::uniform_real_distribution<double> magnitude(spec.lo, spec.hi);
  std::bernoulli_distribution positive(0.5);
  for (Index i : out.support) {
    double v = magnitude(rng);
    if (spec.law == CoeffLaw::signed_uniform && !positive(rng)) v = -v;
    out.beta[i] = v;
  }
  return out;
}

ProblemInstance gen_instance_with_matrix(DenseMatrix X, const CoeffSpec& cspec, double sigma,
                                         const InstanceSeeds& seeds, std::uint64_t recorded_seed) {
  if (!(sigma >= 0.0)) throw InputError("sigma must be nonnegative");
  Coefficients c = gen_coeffs(cspec, X.cols(), seeds.coeffs);
  ProblemInstance inst;
  inst.y = X * c.beta;
  if (sigma > 0.0) {
    Rng rng(seeds.noise);
    std::normal_distribution<double> noise(0.0, sigma);
    for (Index i = 0; i < inst.y.size(); ++i) inst.y[i] += noise(rng);
  }
  inst.X = std::move(X);
  inst.beta0 = std::move(c.beta);
  inst.support = std::move(c.support);
  inst.sigma = sigma;
  inst.seed = recorded_seed;
  return inst;
}

ProblemInstance gen_instance(const MatrixSpec& mspec, const CoeffSpec& cspec, double sigma,
                             const InstanceSeeds& seeds, std::uint64_t recorded_seed) {
  return gen_instance_with_matrix(gen_matrix(mspec, seeds.matrix), cspec, sigma, seeds, recorded_seed);
}

ProblemInstance gen_instance(const MatrixSpec& mspec, const CoeffSpec& cspec, double sigma,
                             std::uint64_t seed) {
  return gen_instance(mspec, cspec, sigma, InstanceSeeds::from_master(seed), seed);
}

std::string family_name(const MatrixFamily& family) {
  return std::visit(
      [](const auto& fam) -> std::string {
        using F = std::decay_t<decltype(fam)>;
        if constexpr (std::is_same_v<F, IidGaussian>) return "iid_gaussian";
        else if constexpr (std::is_same_v<F, Ar1Gaussian>) return "ar1_gaussian";
        else if constexpr (std::is_same_v<F, Structured>) return "structured";
        else return "csv_file";
      },
      family);
}

std::string law_name(CoeffLaw law) {
  switch (law) {
    case CoeffLaw::uniform_pos: return "uniform_pos";
    case CoeffLaw::signed_uniform: return "signed_uniform";
    case CoeffLaw::weak_sparse: return "weak_sparse";
  }
  return "unknown";
}

CoeffLaw parse_law(const std::string& name) {
  if (name == "uniform_pos") return CoeffLaw::uniform_pos;
  if (name == "signed_uniform") return CoeffLaw::signed_uniform;
  if (name == "weak_sparse") return CoeffLaw::weak_sparse;
  throw ConfigError("unknown coefficient law '" + name + "'");
}

}  // namespace assd::datagen
