#include "densecode/linalg.hpp"

#include <cmath>
#include <string>

#include "densecode/errors.hpp"

namespace densecode {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorKind::InvalidDimension,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_deviation(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return INFINITY;
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).norm();
}

bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

int exact_sqrt(Eigen::Index n) {
  const auto root = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(n))));
  if (n <= 0 || root * root != n) {
    throw Error(ErrorKind::InvalidDimension,
                "dimension " + std::to_string(n) + " is not a perfect square");
  }
  return static_cast<int>(root);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Complex weighted_inner(const ComplexMatrix& m, const ComplexMatrix& n,
                       std::span<const double> lambda) {
  const auto d = static_cast<Eigen::Index>(lambda.size());
  if (d == 0 || m.rows() != d || m.cols() != d || n.rows() != d || n.cols() != d) {
    throw Error(ErrorKind::InvalidDimension, "weighted_inner expects two d x d matrices and d weights");
  }
  // tr(M L N^dagger) = sum_{r,k} M_rk lambda_k conj(N_rk)
  Complex acc{0.0, 0.0};
  for (Eigen::Index k = 0; k < d; ++k) {
    acc += lambda[static_cast<std::size_t>(k)] * n.col(k).dot(m.col(k));
  }
  return acc;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, Subsystem traced) {
  require_square(rho, "partial_trace input");
  const int d = exact_sqrt(rho.rows());
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      Complex acc{0.0, 0.0};
      for (int s = 0; s < d; ++s) {
        acc += traced == Subsystem::A ? rho(s * d + a, s * d + b) : rho(a * d + s, b * d + s);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

HermitianEigen eig_hermitian(const ComplexMatrix& h) {
  require_square(h, "eig_hermitian input");
  if (hermitian_deviation(h) > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "matrix deviates from its adjoint by " +
                                             std::to_string(hermitian_deviation(h)));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const auto n = h.rows();
  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen returns ascending order
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

DensityMatrix::DensityMatrix(ComplexMatrix m, bool subnormalized)
    : matrix_(std::move(m)), subnormalized_(subnormalized) {
  require_square(matrix_, "density matrix");
  if (!matrix_.allFinite()) {
    throw Error(ErrorKind::InvalidArgument, "density matrix has non-finite entries");
  }
  if (hermitian_deviation(matrix_) > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "density matrix is not Hermitian");
  }
  const double trace = matrix_.trace().real();
  if (!subnormalized_ && std::abs(trace - 1.0) > kTraceTol) {
    throw Error(ErrorKind::InvalidArgument, "density matrix trace is " + std::to_string(trace));
  }
  const RealVector mu = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(matrix_, Eigen::EigenvaluesOnly).eigenvalues();
  if (mu.minCoeff() < -kHermitianTol) {
    throw Error(ErrorKind::NotPositiveSemidefinite,
                "smallest eigenvalue " + std::to_string(mu.minCoeff()));
  }
}

double entropy_of_eigenvalues(const RealVector& mu) {
  double s = 0.0;
  for (const double v : mu) {
    if (v < -kNegativeEigenvalueTol) {
      throw Error(ErrorKind::NotPositiveSemidefinite, "negative eigenvalue " + std::to_string(v));
    }
    if (v > 0.0) s -= v * std::log(v);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const RealVector mu =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(rho.matrix(), Eigen::EigenvaluesOnly).eigenvalues();
  return entropy_of_eigenvalues(mu);
}

std::vector<ComplexMatrix> hermitian_basis(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "basis dimension must be positive");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex i_unit{0.0, 1.0};
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(d * d));
  for (int j = 0; j < d; ++j) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(j, j) = 1.0;
    basis.push_back(std::move(e));
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(j, k) = inv_sqrt2;
      e(k, j) = inv_sqrt2;
      basis.push_back(std::move(e));
    }
  }
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(j, k) = i_unit * inv_sqrt2;
      e(k, j) = -i_unit * inv_sqrt2;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

ComplexMatrix hermitian_from_params(std::span<const double> theta) {
  const int d = exact_sqrt(static_cast<Eigen::Index>(theta.size()));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const auto pairs = static_cast<std::size_t>(d * (d - 1) / 2);
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) h(j, j) = theta[static_cast<std::size_t>(j)];
  std::size_t p = 0;
  for (int j = 0; j < d; ++j) {
    for (int k = j + 1; k < d; ++k, ++p) {
      const double re = theta[static_cast<std::size_t>(d) + p] * inv_sqrt2;
      const double im = theta[static_cast<std::size_t>(d) + pairs + p] * inv_sqrt2;
      h(j, k) = Complex{re, im};
      h(k, j) = Complex{re, -im};
    }
  }
  return h;
}

ComplexMatrix unitary_from_params(std::span<const double> theta) {
  const ComplexMatrix h = hermitian_from_params(theta);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const RealVector& w = solver.eigenvalues();
  ComplexVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, w(i));
  const ComplexMatrix& v = solver.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

}  // namespace densecode
