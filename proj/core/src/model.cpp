#include "densecode/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "densecode/errors.hpp"

namespace densecode {

namespace {

void require_same_dim(const EncodingScheme& scheme, const SchmidtSpectrum& lambda) {
  if (scheme.dim() != lambda.dim()) {
    throw Error(ErrorKind::InvalidDimension, "scheme acts on d=" + std::to_string(scheme.dim()) +
                                                 " but spectrum has d=" + std::to_string(lambda.dim()));
  }
}

}  // namespace

SchmidtSpectrum::SchmidtSpectrum(std::vector<double> lambdas) {
  if (lambdas.empty()) throw Error(ErrorKind::InvalidSpectrum, "spectrum is empty");
  double sum = 0.0;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double v = lambdas[i];
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidSpectrum, "lambda[" + std::to_string(i) + "] is not finite");
    if (v < 0.0) throw Error(ErrorKind::InvalidSpectrum, "lambda[" + std::to_string(i) + "] is negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSpectrumSumTol) {
    throw Error(ErrorKind::InvalidSpectrum, "coefficients sum to " + std::to_string(sum) + ", not 1");
  }
  order_.resize(lambdas.size());
  std::iota(order_.begin(), order_.end(), 0);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](int a, int b) { return lambdas[static_cast<std::size_t>(a)] > lambdas[static_cast<std::size_t>(b)]; });
  lambdas_.reserve(lambdas.size());
  for (const int i : order_) lambdas_.push_back(lambdas[static_cast<std::size_t>(i)]);
}

SchmidtSpectrum SchmidtSpectrum::uniform(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "d must be positive");
  return SchmidtSpectrum(std::vector<double>(static_cast<std::size_t>(d), 1.0 / d));
}

bool SchmidtSpectrum::is_maximal() const {
  const double target = 1.0 / dim();
  return std::all_of(lambdas_.begin(), lambdas_.end(),
                     [&](double v) { return std::abs(v - target) <= kDegeneracyTol * target; });
}

ComplexMatrix SchmidtSpectrum::as_diagonal() const {
  ComplexMatrix out = ComplexMatrix::Zero(dim(), dim());
  for (int j = 0; j < dim(); ++j) out(j, j) = lambdas_[static_cast<std::size_t>(j)];
  return out;
}

EncodingScheme::EncodingScheme(int d, std::vector<ComplexMatrix> unitaries)
    : d_(d), unitaries_(std::move(unitaries)) {
  if (d_ < 1) throw Error(ErrorKind::InvalidDimension, "d must be positive");
  const auto n = unitaries_.size();
  if (n < 1 || n > static_cast<std::size_t>(d_ * d_)) {
    throw Error(ErrorKind::InvalidArgument, "scheme size " + std::to_string(n) + " outside [1, d^2]");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& u = unitaries_[i];
    if (u.rows() != d_ || u.cols() != d_) {
      throw Error(ErrorKind::InvalidDimension, "unitary " + std::to_string(i) + " is not " +
                                                   std::to_string(d_) + "x" + std::to_string(d_));
    }
    if (!u.allFinite()) throw Error(ErrorKind::InvalidArgument, "unitary " + std::to_string(i) + " has non-finite entries");
    const double dev = unitarity_deviation(u);
    if (dev > kUnitaryTol) {
      throw Error(ErrorKind::NotUnitary, "unitary " + std::to_string(i) + " deviates by " + std::to_string(dev));
    }
  }
}

ComplexVector make_entangled_state(const SchmidtSpectrum& lambda) {
  const int d = lambda.dim();
  ComplexVector psi = ComplexVector::Zero(d * d);
  for (int j = 0; j < d; ++j) psi(j * d + j) = std::sqrt(lambda[static_cast<std::size_t>(j)]);
  return psi;
}

GramMatrix gram(const EncodingScheme& scheme, const SchmidtSpectrum& lambda) {
  require_same_dim(scheme, lambda);
  const int n = scheme.size();
  GramMatrix g{ComplexMatrix(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      g.entries(i, j) = weighted_inner(scheme[static_cast<std::size_t>(j)],
                                       scheme[static_cast<std::size_t>(i)], lambda.values());
    }
  }
  return g;
}

std::vector<ComplexVector> encode(const EncodingScheme& scheme, const SchmidtSpectrum& lambda) {
  require_same_dim(scheme, lambda);
  const ComplexVector psi = make_entangled_state(lambda);
  const ComplexMatrix id = ComplexMatrix::Identity(scheme.dim(), scheme.dim());
  std::vector<ComplexVector> states;
  states.reserve(static_cast<std::size_t>(scheme.size()));
  for (const auto& u : scheme.unitaries()) states.push_back(kron(u, id) * psi);
  return states;
}

VerifyReport verify_scheme(const EncodingScheme& scheme, const SchmidtSpectrum& lambda, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  const GramMatrix g = gram(scheme, lambda);
  const double dev = (g.entries - ComplexMatrix::Identity(g.size(), g.size())).cwiseAbs().maxCoeff();
  return {dev <= tol, dev};
}

EncodingScheme weyl_scheme(int d) {
  if (d < 1) throw Error(ErrorKind::InvalidDimension, "d must be positive");
  ComplexMatrix shift = ComplexMatrix::Zero(d, d);
  ComplexMatrix clock = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    shift((j + 1) % d, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * j / d);
  }
  std::vector<ComplexMatrix> members;
  members.reserve(static_cast<std::size_t>(d * d));
  ComplexMatrix xa = ComplexMatrix::Identity(d, d);
  for (int a = 0; a < d; ++a) {
    ComplexMatrix m = xa;
    for (int b = 0; b < d; ++b) {
      members.push_back(m);
      m = m * clock;
    }
    xa = shift * xa;
  }
  return EncodingScheme(d, std::move(members));
}

}  // namespace densecode
