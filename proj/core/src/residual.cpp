#include "densecode/residual.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "densecode/errors.hpp"

namespace densecode {

int ResidualReport::residual_rank() const {
  const RealVector mu =
      Eigen::SelfAdjointEigenSolver<ComplexMatrix>(residual, Eigen::EigenvaluesOnly).eigenvalues();
  return static_cast<int>((mu.array() > kRankTol).count());
}

ComplexMatrix build_projector(std::span<const ComplexVector> states) {
  if (states.empty()) throw Error(ErrorKind::InvalidArgument, "no states given");
  const auto dim = states.front().size();
  ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].size() != dim) throw Error(ErrorKind::InvalidDimension, "states have different lengths");
    for (std::size_t j = 0; j <= i; ++j) {
      const Complex overlap = states[j].dot(states[i]);
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(overlap - expected) > kProjectorTol) {
        throw Error(ErrorKind::NotOrthonormal, "<psi_" + std::to_string(j) + "|psi_" + std::to_string(i) +
                                                   "> = " + std::to_string(std::abs(overlap)));
      }
    }
    p.noalias() += states[i] * states[i].adjoint();
  }
  return p;
}

ComplexMatrix residual_b_closed_form(const SchmidtSpectrum& lambda, int n_states) {
  const int d = lambda.dim();
  return static_cast<double>(d) * ComplexMatrix::Identity(d, d) -
         static_cast<double>(n_states) * lambda.as_diagonal();
}

ComplexMatrix residual_a_closed_form(const EncodingScheme& scheme, const SchmidtSpectrum& lambda) {
  const int d = lambda.dim();
  const ComplexMatrix weights = lambda.as_diagonal();
  ComplexMatrix out = static_cast<double>(d) * ComplexMatrix::Identity(d, d);
  for (const auto& u : scheme.unitaries()) out -= u * weights * u.adjoint();
  return out;
}

ResidualReport reduced_residuals(const EncodingScheme& scheme, const SchmidtSpectrum& lambda) {
  const VerifyReport check = verify_scheme(scheme, lambda, kProjectorTol);
  if (!check.ok) {
    throw Error(ErrorKind::NotOrthonormal,
                "encoded states are not orthonormal (Gram deviation " + std::to_string(check.max_deviation) + ")");
  }
  const auto states = encode(scheme, lambda);
  ResidualReport r;
  r.d = scheme.dim();
  r.n_states = scheme.size();
  r.projector = build_projector(states);
  r.residual = ComplexMatrix::Identity(r.projector.rows(), r.projector.cols()) - r.projector;
  r.reduced_a = partial_trace(r.residual, Subsystem::B);
  r.reduced_b = partial_trace(r.residual, Subsystem::A);
  return r;
}

ComplexMatrix align_spectra(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::InvalidDimension, "align_spectra operands differ in shape");
  }
  const HermitianEigen ea = eig_hermitian(a);
  const HermitianEigen eb = eig_hermitian(b);
  const double mismatch = (ea.values - eb.values).cwiseAbs().maxCoeff();
  if (mismatch > tol) {
    throw Error(ErrorKind::SpectrumMismatch, "sorted spectra differ by " + std::to_string(mismatch));
  }
  return eb.vectors * ea.vectors.adjoint();
}

ConcavityReport concavity_gap(std::span<const double> p, std::span<const DensityMatrix> rhos) {
  if (p.size() != rhos.size() || p.empty()) {
    throw Error(ErrorKind::InvalidArgument, "need one weight per state");
  }
  double total = 0.0;
  for (const double w : p) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > kTraceTol) throw Error(ErrorKind::InvalidArgument, "weights must sum to 1");
  const auto dim = rhos.front().dim();
  ComplexMatrix mixture = ComplexMatrix::Zero(dim, dim);
  double mean_entropy = 0.0;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (rhos[i].dim() != dim) throw Error(ErrorKind::InvalidDimension, "states have different dimensions");
    mixture += p[i] * rhos[i].matrix();
    mean_entropy += p[i] * von_neumann_entropy(rhos[i]);
  }
  const RealVector mu = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(mixture, Eigen::EigenvaluesOnly).eigenvalues();

  ConcavityReport report;
  report.gap = entropy_of_eigenvalues(mu) - mean_entropy;
  report.equality = report.gap <= kConcavityEqualityTol;
  // roundoff in the entropies is far below this slack
  const double gap = std::max(report.gap, 0.0) + 1e-13;
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    if (p[i] <= 0.0) continue;
    for (std::size_t j = i + 1; j < rhos.size(); ++j) {
      if (p[j] <= 0.0) continue;
      const double dist = (rhos[i].matrix() - rhos[j].matrix()).norm();
      const double bound = std::sqrt(2.0 * gap / p[i]) + std::sqrt(2.0 * gap / p[j]);
      report.max_pairwise_distance = std::max(report.max_pairwise_distance, dist);
      report.distance_bound = std::max(report.distance_bound, bound);
      if (dist > bound) report.states_within_bound = false;
    }
  }
  return report;
}

double commutation_residual(const ComplexMatrix& u, const ComplexMatrix& q) {
  if (u.rows() != u.cols() || q.rows() != q.cols() || u.rows() != q.rows()) {
    throw Error(ErrorKind::InvalidDimension, "commutation_residual operands differ in shape");
  }
  return (u * q - q * u).norm();
}

BlockStructure block_partition(const SchmidtSpectrum& lambda, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "degeneracy tolerance must be positive");
  BlockStructure bs;
  bs.tol = tol;
  const auto values = lambda.values();
  std::size_t head = 0;
  for (std::size_t j = 1; j <= values.size(); ++j) {
    if (j == values.size() || std::abs(values[j] - values[head]) > tol * values[head]) {
      bs.block_sizes.push_back(static_cast<int>(j - head));
      head = j;
    }
  }
  bs.t = bs.block_sizes.front();
  for (const int s : bs.block_sizes) bs.subalgebra_dim += s * s;
  bs.maximal = bs.block_sizes.size() == 1;
  return bs;
}

bool zero_pattern_check(const ComplexMatrix& u, int t, double tol) {
  const auto d = u.rows();
  if (u.cols() != d) throw Error(ErrorKind::InvalidDimension, "zero_pattern_check needs a square matrix");
  if (t < 1 || t > d) throw Error(ErrorKind::InvalidArgument, "t must lie in [1, d]");
  const auto rest = d - t;
  if (rest == 0) return true;
  return u.topRightCorner(t, rest).cwiseAbs().maxCoeff() <= tol &&
         u.bottomLeftCorner(rest, t).cwiseAbs().maxCoeff() <= tol;
}

DimensionBound dimension_bound(int d, int t) {
  if (d < 2 || t < 1 || t >= d) {
    throw Error(ErrorKind::InvalidArgument,
                "dimension_bound needs 1 <= t < d, got d=" + std::to_string(d) + " t=" + std::to_string(t));
  }
  return {t * t + (d - t) * (d - t), d * d - 2 * d + 2};
}

FloorCheck lambda_floor_check(const SchmidtSpectrum& lambda) {
  FloorCheck fc;
  fc.floor = 1.0 / (lambda.dim() + 1);
  fc.min_lambda = lambda.min();
  fc.passes = fc.min_lambda >= fc.floor - kFloorSlack;
  return fc;
}

std::string_view to_string(CertificateRoute route) noexcept {
  return route == CertificateRoute::FloorViolation ? "FloorViolation" : "DimensionContradiction";
}

ImpossibilityCertificate certify_impossibility(const SchmidtSpectrum& lambda, double degeneracy_tol) {
  const int d = lambda.dim();
  const BlockStructure blocks = block_partition(lambda, degeneracy_tol);
  if (lambda.is_maximal() || blocks.maximal) {
    throw Error(ErrorKind::NotPartialEntanglement,
                "spectrum is maximally entangled; the d^2-1 bound needs partial entanglement");
  }
  if (!lambda.strictly_positive()) {
    throw Error(ErrorKind::DegenerateSpectrum, "spectrum has a zero Schmidt coefficient");
  }

  ImpossibilityCertificate cert(lambda);
  cert.t = blocks.t;
  cert.block_sizes = blocks.block_sizes;
  cert.target_n = d * d - 1;
  cert.degeneracy_tol = degeneracy_tol;
  const DimensionBound bound = dimension_bound(d, blocks.t);
  cert.subalgebra_dim = bound.dim;
  cert.cap = bound.cap;

  auto& log = cert.step_log;
  log.push_back({"d", static_cast<double>(d)});
  log.push_back({"target_n", static_cast<double>(cert.target_n)});

  // A hypothetical d^2-1 scheme leaves a rank-1 residual whose reduction on
  // B is diag(d - (d^2-1) lambda_j); every entry must lie in [0, 1].
  const FloorCheck floor = lambda_floor_check(lambda);
  cert.floor = floor.floor;
  log.push_back({"floor", floor.floor});
  log.push_back({"min_lambda", floor.min_lambda});
  log.push_back({"residual_b_max_diagonal", d - cert.target_n * floor.min_lambda});
  log.push_back({"residual_b_min_diagonal", d - cert.target_n * lambda.max()});
  if (!floor.passes) {
    cert.route = CertificateRoute::FloorViolation;
    log.push_back({"floor_margin", floor.floor - floor.min_lambda});
    return cert;
  }

  cert.route = CertificateRoute::DimensionContradiction;
  log.push_back({"t", static_cast<double>(blocks.t)});
  log.push_back({"block_count", static_cast<double>(blocks.block_sizes.size())});
  log.push_back({"commutant_dim", static_cast<double>(blocks.subalgebra_dim)});
  log.push_back({"subalgebra_dim", static_cast<double>(bound.dim)});
  log.push_back({"cap", static_cast<double>(bound.cap)});
  log.push_back({"target_minus_dim", static_cast<double>(cert.target_n - bound.dim)});
  return cert;
}

nlohmann::json certificate_to_json(const ImpossibilityCertificate& cert) {
  nlohmann::json j;
  j["d"] = cert.spectrum.dim();
  j["lambda"] = std::vector<double>(cert.spectrum.values().begin(), cert.spectrum.values().end());
  j["route"] = std::string(to_string(cert.route));
  j["verdict"] = std::string(ImpossibilityCertificate::verdict);
  j["t"] = cert.t;
  j["block_sizes"] = cert.block_sizes;
  j["subalgebra_dim"] = cert.subalgebra_dim;
  j["cap"] = cert.cap;
  j["target_n"] = cert.target_n;
  j["floor"] = cert.floor;
  j["degeneracy_tol"] = cert.degeneracy_tol;
  auto steps = nlohmann::json::array();
  for (const auto& s : cert.step_log) steps.push_back({{"name", s.name}, {"value", s.value}});
  j["step_log"] = std::move(steps);
  return j;
}

}  // namespace densecode
