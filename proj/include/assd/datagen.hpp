#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "assd/types.hpp"

namespace assd::datagen {

/// Entries i.i.d. N(0, 1).
struct IidGaussian {};

/// Rows i.i.d. N(0, Σ) with Σ_ij = pi^|i−j|.
struct Ar1Gaussian {
  double pi = 0.0;
};

/// Product of n×rank and rank×p i.i.d. N(0, 1) factors.
struct Structured {
  Index rank = 1;
};

/// Rows and columns subsampled from a numeric CSV matrix.
struct CsvFile {
  std::string path;
  bool standardize = false;  // z-score columns after subsampling
  std::shared_ptr<const DenseMatrix> cache;  // filled by preload(); read from path otherwise
};

using MatrixFamily = std::variant<IidGaussian, Ar1Gaussian, Structured, CsvFile>;

struct MatrixSpec {
  MatrixFamily family;
  Index n = 1;
  Index p = 1;

  void validate() const;
};

/// Loads a CsvFile family's source matrix once so repeated draws skip parsing.
void preload(MatrixSpec& spec);

enum class CoeffLaw { uniform_pos, signed_uniform, weak_sparse };

struct CoeffSpec {
  Index s0 = 0;
  CoeffLaw law = CoeffLaw::uniform_pos;
  double lo = 0.5;
  double hi = 1.0;
  double tail_value = 0.0;  // off-support value for weak_sparse

  void validate(Index p) const;
};

struct ProblemInstance {
  DenseMatrix X;
  Vector y;
  std::optional<Vector> beta0;
  IndexList support;  // planted strong coefficients, ascending
  double sigma = 0.0;
  std::uint64_t seed = 0;

  double alpha() const { return static_cast<double>(X.rows()) / static_cast<double>(X.cols()); }
  double rho() const {
    return static_cast<double>(support.size()) / static_cast<double>(X.cols());
  }
};

/// Independent seeds for the three random streams of an instance.
struct InstanceSeeds {
  std::uint64_t matrix = 0;
  std::uint64_t coeffs = 0;
  std::uint64_t noise = 0;

  static InstanceSeeds from_master(std::uint64_t master);
};

DenseMatrix gen_matrix(const MatrixSpec& spec, std::uint64_t seed);

/// Coefficients plus the planted support they were drawn on.
struct Coefficients {
  Vector beta;
  IndexList support;
};

Coefficients gen_coeffs(const CoeffSpec& spec, Index p, std::uint64_t seed);

/// y = Xβ⁰ + ε with ε i.i.d. N(0, σ²); sub-seeds derived from `seed`.
ProblemInstance gen_instance(const MatrixSpec& mspec, const CoeffSpec& cspec, double sigma,
                             std::uint64_t seed);

ProblemInstance gen_instance(const MatrixSpec& mspec, const CoeffSpec& cspec, double sigma,
                             const InstanceSeeds& seeds, std::uint64_t recorded_seed);

/// Same law as gen_instance but with a matrix supplied by the caller.
ProblemInstance gen_instance_with_matrix(DenseMatrix X, const CoeffSpec& cspec, double sigma,
                                         const InstanceSeeds& seeds, std::uint64_t recorded_seed);

/// Z-scores every column in place (sample s.d.); constant columns are only centered.
void standardize_columns(DenseMatrix& X);

std::string family_name(const MatrixFamily& family);
std::string law_name(CoeffLaw law);
CoeffLaw parse_law(const std::string& name);

}  // namespace assd::datagen
