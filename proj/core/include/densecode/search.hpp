#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "densecode/model.hpp"

namespace densecode {

struct SearchConfig {
  int n_letters = 2;
  int restarts = 50;
  int max_iters = 5000;
  double success_tol = 1e-8;
  /// A run whose best objective lands in (success_tol, failure_tol] is
  /// reported as ambiguous rather than failed.
  double failure_tol = 1e-6;
  std::uint64_t base_seed = 0;
  double step_init = 0.1;
  double step_shrink = 0.5;
  double min_step = 1e-14;
  /// A descent stops once the objective reaches this value.
  double stop_objective = 1e-24;
  /// Stop at the first successful restart (in restart-index order).
  bool stop_on_success = true;
  /// Worker threads; results do not depend on this.
  int threads = 1;
  bool record_trace = false;

  void validate(int d) const;
};

struct RestartRecord {
  int restart = 0;
  std::uint64_t seed = 0;
  double final_objective = 0.0;
  int iterations = 0;
  std::vector<double> trace;  // objective after each accepted step, when recorded
};

struct SearchResult {
  explicit SearchResult(EncodingScheme scheme) : best_scheme(std::move(scheme)) {}

  EncodingScheme best_scheme;
  double best_objective = 0.0;
  bool succeeded = false;
  bool ambiguous = false;
  int restarts_used = 0;
  long long iterations_total = 0;
  std::uint64_t seed_of_best = 0;
  std::vector<RestartRecord> restarts;  // ordered by restart index
};

using ProgressCallback = std::function<void(const RestartRecord&)>;

/// sum_{i<j} |G_ij|^2
double objective(const EncodingScheme& scheme, const SchmidtSpectrum& lambda);

/// Objective of the scheme whose i-th member is unitary_from_params of the
/// i-th block of d^2 parameters.
double objective_from_params(std::span<const double> params, const SchmidtSpectrum& lambda);

/// Analytic gradient of objective_from_params.
std::vector<double> gradient(std::span<const double> params, const SchmidtSpectrum& lambda);

/// Both at once; `grad` is resized to params.size().
double objective_and_gradient(std::span<const double> params, const SchmidtSpectrum& lambda,
                              std::vector<double>& grad);

EncodingScheme scheme_from_params(std::span<const double> params, int d);

/// Uniform draws in [-pi, pi) for every coordinate of restart `seed`.
/// The first member is held at the identity (its block is zero).
std::vector<double> initial_params(std::uint64_t seed, int d, int n_letters);

/// Multi-restart gradient descent with backtracking. Restart k is seeded
/// with base_seed + k and is computed independently of all others, so the
/// result is the same for any thread count.
SearchResult optimize(const SchmidtSpectrum& lambda, const SearchConfig& config,
                      const ProgressCallback& progress = {});

struct AlphabetEstimate {
  /// Largest N that the search realized. A lower bound on the true maximal
  /// alphabet: a failed search does not prove that no scheme exists.
  int n_estimate = 0;
  std::vector<int> n_values;
  std::vector<SearchResult> per_n;
};

/// Runs optimize for N = d, ..., d^2 using `base` for everything except
/// n_letters.
AlphabetEstimate estimate_max_alphabet(const SchmidtSpectrum& lambda, const SearchConfig& base);

}  // namespace densecode
