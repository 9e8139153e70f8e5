#pragma once

#include <span>
#include <vector>

#include "densecode/linalg.hpp"

namespace densecode {

inline constexpr double kSpectrumSumTol = 1e-12;
inline constexpr double kDegeneracyTol = 1e-9;  // relative
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kDefaultVerifyTol = 1e-8;

/// Schmidt coefficients of a bipartite pure state, kept in descending order.
class SchmidtSpectrum {
 public:
  /// Sorts descending (stable, so ties keep their input order) and checks
  /// that the values form a probability vector.
  explicit SchmidtSpectrum(std::vector<double> lambdas);

  static SchmidtSpectrum uniform(int d);

  int dim() const { return static_cast<int>(lambdas_.size()); }
  std::span<const double> values() const { return lambdas_; }
  double operator[](std::size_t i) const { return lambdas_[i]; }
  double max() const { return lambdas_.front(); }
  double min() const { return lambdas_.back(); }

  /// max_j |lambda_j - 1/d| <= kDegeneracyTol / d
  bool is_maximal() const;
  /// Some coefficient is exactly zero; the weighted inner product is then
  /// only semidefinite.
  bool has_zero() const { return lambdas_.back() == 0.0; }
  bool strictly_positive() const { return lambdas_.back() > 0.0; }

  ComplexMatrix as_diagonal() const;

  /// Permutation applied on construction: values()[i] == input[order()[i]].
  const std::vector<int>& order() const { return order_; }

 private:
  std::vector<double> lambdas_;
  std::vector<int> order_;
};

/// Ordered list of N local unitaries acting on Alice's d-level system.
class EncodingScheme {
 public:
  EncodingScheme(int d, std::vector<ComplexMatrix> unitaries);

  int dim() const { return d_; }
  int size() const { return static_cast<int>(unitaries_.size()); }
  const std::vector<ComplexMatrix>& unitaries() const { return unitaries_; }
  const ComplexMatrix& operator[](std::size_t i) const { return unitaries_[i]; }

 private:
  int d_;
  std::vector<ComplexMatrix> unitaries_;
};

struct GramMatrix {
  ComplexMatrix entries;
  Eigen::Index size() const { return entries.rows(); }
};

struct VerifyReport {
  bool ok = false;
  double max_deviation = 0.0;
};

/// sum_j sqrt(lambda_j) |j>_A |j>_B as a length d^2 vector.
ComplexVector make_entangled_state(const SchmidtSpectrum& lambda);

/// G_ij = tr(U_j Lambda U_i^dagger).
GramMatrix gram(const EncodingScheme& scheme, const SchmidtSpectrum& lambda);

/// (U_i (x) I)|psi> for every member of the scheme.
std::vector<ComplexVector> encode(const EncodingScheme& scheme, const SchmidtSpectrum& lambda);

/// max entrywise |G - I| against `tol`.
VerifyReport verify_scheme(const EncodingScheme& scheme, const SchmidtSpectrum& lambda,
                           double tol = kDefaultVerifyTol);

/// Clock-and-shift family {X^a Z^b : 0 <= a, b < d}, ordered by a then b.
EncodingScheme weyl_scheme(int d);

}  // namespace densecode
