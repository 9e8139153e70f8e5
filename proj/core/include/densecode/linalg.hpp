#pragma once

// Small dense complex linear algebra used throughout the toolkit.
//
// Bipartite index convention: the basis element |j>_A |k>_B of a d x d
// system maps to row j * d + k. Every kron product and partial trace in
// the library uses this ordering.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace densecode {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
// Eigenvalues in [-kNegativeEigenvalueTol, 0) are treated as roundoff.
inline constexpr double kNegativeEigenvalueTol = 1e-8;

enum class Subsystem { A, B };

/// Largest entrywise modulus of M - M^dagger.
double hermitian_deviation(const ComplexMatrix& m);

/// Frobenius norm of U^dagger U - I.
double unitarity_deviation(const ComplexMatrix& u);

bool all_finite(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// tr(M diag(lambda) N^dagger).
///
/// A genuine inner product on d x d matrices whenever every weight is
/// strictly positive; with zero weights it is only positive semidefinite.
Complex weighted_inner(const ComplexMatrix& m, const ComplexMatrix& n,
                       std::span<const double> lambda);

/// Traces out `traced` from a d^2 x d^2 operator and returns the d x d
/// operator on the other subsystem.
ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem traced);

struct HermitianEigen {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns match `values`
};

HermitianEigen eig_hermitian(const ComplexMatrix& h);

/// A validated positive semidefinite Hermitian operator. Unit trace is
/// required unless the matrix is marked subnormalized (residual
/// projectors have trace d^2 - N).
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m, bool subnormalized = false);

  Eigen::Index dim() const { return matrix_.rows(); }
  const ComplexMatrix& matrix() const { return matrix_; }
  bool subnormalized() const { return subnormalized_; }

 private:
  ComplexMatrix matrix_;
  bool subnormalized_;
};

/// -sum mu ln mu over the given eigenvalues (nats). Values in
/// [-kNegativeEigenvalueTol, 0) are clipped to zero; anything lower throws.
double entropy_of_eigenvalues(const RealVector& mu);

double von_neumann_entropy(const DensityMatrix& rho);

/// Fixed Hermitian basis of d x d matrices: d diagonal units, then
/// (E_jk + E_kj)/sqrt2 for j < k, then i(E_jk - E_kj)/sqrt2 for j < k,
/// each group in lexicographic (j, k) order.
std::vector<ComplexMatrix> hermitian_basis(int d);

/// Builds sum_m theta_m H_m over hermitian_basis(d) without materializing
/// the basis.
ComplexMatrix hermitian_from_params(std::span<const double> theta);

/// exp(i sum_m theta_m H_m). theta must hold d^2 values.
ComplexMatrix unitary_from_params(std::span<const double> theta);

/// d such that d * d == n, or throws InvalidDimension.
int exact_sqrt(Eigen::Index n);

}  // namespace densecode
