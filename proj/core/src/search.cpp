#include "densecode/search.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include "densecode/errors.hpp"

namespace densecode {

namespace {

// Eigendecomposition of each generator plus everything the objective
// needs, so that the gradient can reuse it.
struct Evaluation {
  int d = 0;
  int n = 0;
  std::vector<ComplexMatrix> eigvecs;
  std::vector<RealVector> eigvals;
  std::vector<ComplexMatrix> unitaries;
  ComplexMatrix gram;
  double value = 0.0;
};

int block_count(std::span<const double> params, int d) {
  const auto block = static_cast<std::size_t>(d * d);
  if (params.empty() || params.size() % block != 0) {
    throw Error(ErrorKind::InvalidDimension, "parameter vector length " + std::to_string(params.size()) +
                                                 " is not a multiple of d^2 = " + std::to_string(block));
  }
  return static_cast<int>(params.size() / block);
}

ComplexMatrix gram_fast(const std::vector<ComplexMatrix>& unitaries, std::span<const double> lambda) {
  const auto d = static_cast<Eigen::Index>(lambda.size());
  const auto n = static_cast<Eigen::Index>(unitaries.size());
  RealVector sqrt_lambda(d);
  for (Eigen::Index k = 0; k < d; ++k) sqrt_lambda(k) = std::sqrt(lambda[static_cast<std::size_t>(k)]);
  // column i holds vec(U_i Lambda^{1/2}); G = M^dagger M
  ComplexMatrix m(d * d, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ComplexMatrix scaled = unitaries[static_cast<std::size_t>(i)] * sqrt_lambda.asDiagonal();
    m.col(i) = Eigen::Map<const ComplexVector>(scaled.data(), d * d);
  }
  return m.adjoint() * m;
}

double off_diagonal_energy(const ComplexMatrix& g) {
  double acc = 0.0;
  for (Eigen::Index j = 1; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) acc += std::norm(g(i, j));
  }
  return acc;
}

Evaluation evaluate(std::span<const double> params, const SchmidtSpectrum& lambda) {
  Evaluation ev;
  ev.d = lambda.dim();
  ev.n = block_count(params, ev.d);
  const auto block = static_cast<std::size_t>(ev.d * ev.d);
  ev.eigvecs.reserve(static_cast<std::size_t>(ev.n));
  ev.eigvals.reserve(static_cast<std::size_t>(ev.n));
  ev.unitaries.reserve(static_cast<std::size_t>(ev.n));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(ev.d);
  for (int k = 0; k < ev.n; ++k) {
    solver.compute(hermitian_from_params(params.subspan(static_cast<std::size_t>(k) * block, block)));
    const RealVector& w = solver.eigenvalues();
    const ComplexMatrix& v = solver.eigenvectors();
    ComplexVector phases(ev.d);
    for (int a = 0; a < ev.d; ++a) phases(a) = std::polar(1.0, w(a));
    ev.unitaries.push_back(v * phases.asDiagonal() * v.adjoint());
    ev.eigvecs.push_back(v);
    ev.eigvals.push_back(w);
  }
  ev.gram = gram_fast(ev.unitaries, lambda.values());
  ev.value = off_diagonal_energy(ev.gram);
  return ev;
}

// d f = Re tr(A_k dU_k) with A_k = 2 Lambda sum_{i != k} G_ki U_i^dagger.
// For U = exp(iH), H = V diag(h) V^dagger, the derivative along E is
// V (L o V^dagger E V) V^dagger with L_ab = i e^{i(h_a+h_b)/2} sinc((h_a-h_b)/2).
void accumulate_gradient(const Evaluation& ev, std::span<const double> lambda, std::vector<double>& grad) {
  const int d = ev.d;
  const auto block = static_cast<std::size_t>(d * d);
  const auto pairs = static_cast<std::size_t>(d * (d - 1) / 2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  grad.assign(block * static_cast<std::size_t>(ev.n), 0.0);
  RealVector two_lambda(d);
  for (int k = 0; k < d; ++k) two_lambda(k) = 2.0 * lambda[static_cast<std::size_t>(k)];

  for (int k = 0; k < ev.n; ++k) {
    ComplexMatrix acc = ComplexMatrix::Zero(d, d);
    for (int i = 0; i < ev.n; ++i) {
      if (i != k) acc += ev.gram(k, i) * ev.unitaries[static_cast<std::size_t>(i)].adjoint();
    }
    const ComplexMatrix a = two_lambda.asDiagonal() * acc;
    const ComplexMatrix& v = ev.eigvecs[static_cast<std::size_t>(k)];
    const RealVector& h = ev.eigvals[static_cast<std::size_t>(k)];
    const ComplexMatrix c = v.adjoint() * a * v;
    ComplexMatrix y(d, d);
    for (int p = 0; p < d; ++p) {
      for (int q = 0; q < d; ++q) {
        const double half_gap = 0.5 * (h(p) - h(q));
        const double sinc = std::abs(half_gap) < 1e-8 ? 1.0 - half_gap * half_gap / 6.0 : std::sin(half_gap) / half_gap;
        const Complex l = Complex{0.0, 1.0} * std::polar(sinc, 0.5 * (h(p) + h(q)));
        y(p, q) = c(q, p) * l;
      }
    }
    const ComplexMatrix z = v.conjugate() * y * v.transpose();

    double* g = grad.data() + static_cast<std::size_t>(k) * block;
    for (int j = 0; j < d; ++j) g[j] = z(j, j).real();
    std::size_t p = 0;
    for (int j = 0; j < d; ++j) {
      for (int q = j + 1; q < d; ++q, ++p) {
        g[static_cast<std::size_t>(d) + p] = (z(j, q).real() + z(q, j).real()) * inv_sqrt2;
        g[static_cast<std::size_t>(d) + pairs + p] = (z(q, j).imag() - z(j, q).imag()) * inv_sqrt2;
      }
    }
  }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct RestartOutcome {
  RestartRecord record;
  std::vector<double> params;
};

RestartOutcome run_restart(const SchmidtSpectrum& lambda, const SearchConfig& cfg, int restart) {
  const int d = lambda.dim();
  const auto block = static_cast<std::size_t>(d * d);
  RestartOutcome out;
  out.record.restart = restart;
  out.record.seed = cfg.base_seed + static_cast<std::uint64_t>(restart);

  std::vector<double> theta = initial_params(out.record.seed, d, cfg.n_letters);
  std::vector<double> grad;
  std::vector<double> trial(theta.size());
  Evaluation current = evaluate(theta, lambda);
  accumulate_gradient(current, lambda.values(), grad);
  std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(block), 0.0);  // U_0 = I is frozen
  double f = current.value;
  double step = cfg.step_init;
  if (cfg.record_trace) out.record.trace.push_back(f);

  std::vector<double> prev_grad;
  int iters = 0;
  while (iters < cfg.max_iters && f > cfg.stop_objective) {
    bool accepted = false;
    while (step >= cfg.min_step) {
      for (std::size_t m = 0; m < theta.size(); ++m) trial[m] = theta[m] - step * grad[m];
      Evaluation candidate = evaluate(trial, lambda);
      if (candidate.value < f) {
        const double taken = step;
        theta.swap(trial);
        current = std::move(candidate);
        f = current.value;
        prev_grad.swap(grad);
        accumulate_gradient(current, lambda.values(), grad);
        std::fill(grad.begin(), grad.begin() + static_cast<std::ptrdiff_t>(block), 0.0);
        // Barzilai-Borwein trial step for the next iteration, with
        // s = -taken * prev_grad and y = grad - prev_grad.
        double sy = 0.0;
        double ss = 0.0;
        for (std::size_t m = 0; m < grad.size(); ++m) {
          const double s_m = -taken * prev_grad[m];
          sy += s_m * (grad[m] - prev_grad[m]);
          ss += s_m * s_m;
        }
        step = sy > 0.0 && std::isfinite(ss / sy) ? std::min(ss / sy, 1e6) : std::min(taken / cfg.step_shrink, 1e6);
        accepted = true;
        break;
      }
      step *= cfg.step_shrink;
    }
    if (!accepted) break;
    ++iters;
    if (cfg.record_trace) out.record.trace.push_back(f);
  }
  out.record.final_objective = f;
  out.record.iterations = iters;
  out.params = std::move(theta);
  return out;
}

}  // namespace

void SearchConfig::validate(int d) const {
  auto bad = [](const std::string& msg) { throw Error(ErrorKind::InvalidArgument, msg); };
  if (n_letters < 1 || n_letters > d * d) bad("n_letters must lie in [1, d^2]");
  if (restarts < 1) bad("restarts must be at least 1");
  if (max_iters < 0) bad("max_iters must be non-negative");
  if (!(success_tol > 0.0)) bad("success_tol must be positive");
  if (!(failure_tol >= success_tol)) bad("failure_tol must be at least success_tol");
  if (!(step_init > 0.0)) bad("step_init must be positive");
  if (!(step_shrink > 0.0 && step_shrink < 1.0)) bad("step_shrink must lie in (0, 1)");
  if (!(min_step > 0.0)) bad("min_step must be positive");
  if (threads < 1) bad("threads must be at least 1");
}

double objective(const EncodingScheme& scheme, const SchmidtSpectrum& lambda) {
  if (scheme.dim() != lambda.dim()) throw Error(ErrorKind::InvalidDimension, "scheme and spectrum dimensions differ");
  return off_diagonal_energy(gram_fast(scheme.unitaries(), lambda.values()));
}

double objective_from_params(std::span<const double> params, const SchmidtSpectrum& lambda) {
  return evaluate(params, lambda).value;
}

double objective_and_gradient(std::span<const double> params, const SchmidtSpectrum& lambda,
                              std::vector<double>& grad) {
  const Evaluation ev = evaluate(params, lambda);
  accumulate_gradient(ev, lambda.values(), grad);
  return ev.value;
}

std::vector<double> gradient(std::span<const double> params, const SchmidtSpectrum& lambda) {
  std::vector<double> grad;
  objective_and_gradient(params, lambda, grad);
  return grad;
}

EncodingScheme scheme_from_params(std::span<const double> params, int d) {
  const int n = block_count(params, d);
  const auto block = static_cast<std::size_t>(d * d);
  std::vector<ComplexMatrix> members;
  members.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    members.push_back(unitary_from_params(params.subspan(static_cast<std::size_t>(k) * block, block)));
  }
  return EncodingScheme(d, std::move(members));
}

std::vector<double> initial_params(std::uint64_t seed, int d, int n_letters) {
  const auto block = static_cast<std::size_t>(d * d);
  std::vector<double> theta(block * static_cast<std::size_t>(n_letters), 0.0);
  std::mt19937_64 rng(seed);
  for (std::size_t m = block; m < theta.size(); ++m) {
    theta[m] = std::numbers::pi * (2.0 * uniform01(rng) - 1.0);
  }
  return theta;
}

SearchResult optimize(const SchmidtSpectrum& lambda, const SearchConfig& config, const ProgressCallback& progress) {
  config.validate(lambda.dim());
  if (!lambda.strictly_positive()) {
    throw Error(ErrorKind::DegenerateSpectrum, "search requires strictly positive Schmidt coefficients");
  }

  std::vector<std::optional<RestartOutcome>> outcomes(static_cast<std::size_t>(config.restarts));
  std::atomic<int> next{0};
  std::atomic<int> first_success{INT_MAX};
  auto worker = [&] {
    for (;;) {
      const int k = next.fetch_add(1);
      if (k >= config.restarts) return;
      if (config.stop_on_success && k > first_success.load()) continue;
      RestartOutcome out = run_restart(lambda, config, k);
      if (out.record.final_objective <= config.success_tol) {
        int seen = first_success.load();
        while (k < seen && !first_success.compare_exchange_weak(seen, k)) {
        }
      }
      outcomes[static_cast<std::size_t>(k)] = std::move(out);
    }
  };
  const int threads = std::min(config.threads, config.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  // Restarts past the first success (in index order) are discarded even if
  // some worker computed them, so the result never depends on scheduling.
  const int last = config.stop_on_success ? std::min(first_success.load(), config.restarts - 1) : config.restarts - 1;
  const RestartOutcome* best = nullptr;
  std::vector<RestartRecord> records;
  long long iterations = 0;
  for (int k = 0; k <= last; ++k) {
    const RestartOutcome& out = *outcomes[static_cast<std::size_t>(k)];
    iterations += out.record.iterations;
    if (best == nullptr || out.record.final_objective < best->record.final_objective ||
        (out.record.final_objective == best->record.final_objective && out.record.seed < best->record.seed)) {
      best = &out;
    }
    records.push_back(out.record);
    if (progress) progress(out.record);
  }

  SearchResult result(scheme_from_params(best->params, lambda.dim()));
  result.best_objective = best->record.final_objective;
  result.succeeded = result.best_objective <= config.success_tol;
  result.ambiguous = !result.succeeded && result.best_objective <= config.failure_tol;
  result.restarts_used = last + 1;
  result.iterations_total = iterations;
  result.seed_of_best = best->record.seed;
  result.restarts = std::move(records);
  return result;
}

AlphabetEstimate estimate_max_alphabet(const SchmidtSpectrum& lambda, const SearchConfig& base) {
  const int d = lambda.dim();
  AlphabetEstimate est;
  for (int n = d; n <= d * d; ++n) {
    SearchConfig cfg = base;
    cfg.n_letters = n;
    SearchResult r = optimize(lambda, cfg);
    if (r.succeeded) est.n_estimate = n;
    est.n_values.push_back(n);
    est.per_n.push_back(std::move(r));
  }
  return est;
}

}  // namespace densecode
