#pragma once

// Executable form of the d^2 - 1 impossibility argument: the residual
// projector left over by an encoding, its reductions on each side, the
// entropy and commutation steps, the block structure forced on the
// encoding unitaries, and the final certificate.

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "densecode/linalg.hpp"
#include "densecode/model.hpp"

namespace densecode {

inline constexpr double kProjectorTol = 1e-8;
inline constexpr double kConcavityEqualityTol = 1e-8;
inline constexpr double kRankTol = 1e-8;
inline constexpr double kFloorSlack = 1e-12;

struct ResidualReport {
  int d = 0;
  int n_states = 0;
  ComplexMatrix projector;  // P, d^2 x d^2
  ComplexMatrix residual;   // Q = I - P
  ComplexMatrix reduced_a;  // tr_B Q
  ComplexMatrix reduced_b;  // tr_A Q

  /// Number of eigenvalues of Q above kRankTol.
  int residual_rank() const;
};

/// P = sum_i |psi_i><psi_i|. Throws NotOrthonormal when the states are not
/// orthonormal within kProjectorTol.
ComplexMatrix build_projector(std::span<const ComplexVector> states);

/// Requires verify_scheme to pass at kProjectorTol.
ResidualReport reduced_residuals(const EncodingScheme& scheme, const SchmidtSpectrum& lambda);

/// dI - N Lambda: what tr_A Q must equal for any valid N-letter scheme.
ComplexMatrix residual_b_closed_form(const SchmidtSpectrum& lambda, int n_states);
/// dI - sum_i U_i Lambda U_i^dagger.
ComplexMatrix residual_a_closed_form(const EncodingScheme& scheme, const SchmidtSpectrum& lambda);

/// Returns U with U A U^dagger = B. Under degenerate spectra any valid
/// representative is returned.
ComplexMatrix align_spectra(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

struct ConcavityReport {
  double gap = 0.0;  // S(sum p_i rho_i) - sum p_i S(rho_i), nats
  bool equality = false;  // gap <= kConcavityEqualityTol
  /// Largest Frobenius distance between states carrying positive weight.
  double max_pairwise_distance = 0.0;
  /// Pinsker bound: ||rho_i - rho_j||_F <= sqrt(2 gap / p_i) + sqrt(2 gap / p_j),
  /// maximised over positive-weight pairs.
  double distance_bound = 0.0;
  bool states_within_bound = true;
};

ConcavityReport concavity_gap(std::span<const double> p, std::span<const DensityMatrix> rhos);

/// ||U Q - Q U||_F
double commutation_residual(const ComplexMatrix& u, const ComplexMatrix& q);

struct BlockStructure {
  int t = 0;
  std::vector<int> block_sizes;
  int subalgebra_dim = 0;  // sum of squared block sizes
  bool maximal = false;    // single block
  double tol = kDegeneracyTol;
};

/// Groups consecutive coefficients within relative `tol` of the first
/// coefficient of their block.
BlockStructure block_partition(const SchmidtSpectrum& lambda, double tol = kDegeneracyTol);

/// True when every entry coupling the leading t x t block to the rest has
/// modulus <= tol, i.e. U = U_0 (+) U_1.
bool zero_pattern_check(const ComplexMatrix& u, int t, double tol);

struct DimensionBound {
  int dim = 0;  // t^2 + (d - t)^2
  int cap = 0;  // d^2 - 2d + 2
};

DimensionBound dimension_bound(int d, int t);

struct FloorCheck {
  bool passes = false;
  double floor = 0.0;  // 1 / (d + 1)
  double min_lambda = 0.0;
};

FloorCheck lambda_floor_check(const SchmidtSpectrum& lambda);

enum class CertificateRoute { FloorViolation, DimensionContradiction };
std::string_view to_string(CertificateRoute route) noexcept;

struct CertificateStep {
  std::string name;
  double value = 0.0;
};

struct ImpossibilityCertificate {
  explicit ImpossibilityCertificate(SchmidtSpectrum s) : spectrum(std::move(s)) {}

  SchmidtSpectrum spectrum;
  CertificateRoute route = CertificateRoute::DimensionContradiction;
  int t = 0;
  std::vector<int> block_sizes;
  int subalgebra_dim = 0;  // t^2 + (d - t)^2
  int cap = 0;
  int target_n = 0;        // d^2 - 1
  double floor = 0.0;
  double degeneracy_tol = kDegeneracyTol;
  std::vector<CertificateStep> step_log;

  static constexpr std::string_view verdict = "Impossible";
};

/// Proves that no N = d^2 - 1 unitary scheme exists for a partially
/// entangled, strictly positive spectrum. The floor route is tried first;
/// the dimension route is the unconditional fallback.
ImpossibilityCertificate certify_impossibility(const SchmidtSpectrum& lambda,
                                               double degeneracy_tol = kDegeneracyTol);

nlohmann::json certificate_to_json(const ImpossibilityCertificate& cert);

}  // namespace densecode
