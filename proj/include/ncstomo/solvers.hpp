#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ncstomo/circulant.hpp"
#include "ncstomo/image.hpp"
#include "ncstomo/linear_map.hpp"
#include "ncstomo/prox.hpp"

namespace ncstomo {

/// One term of min_x sum_i g_i(w_i A_i x - o_i). An empty offset means zero.
struct SplitBlock {
  double weight = 1.0;
  std::shared_ptr<const LinearMap> map;
  std::shared_ptr<const ProxConj> prox;
  std::vector<double> offset;
};

class SplitProblem {
 public:
  SplitProblem(int n, std::vector<SplitBlock> blocks);

  int n() const { return n_; }
  std::size_t domain_size() const { return stacked_->domain_size(); }
  std::size_t range_size() const { return stacked_->range_size(); }
  const std::vector<SplitBlock>& blocks() const { return blocks_; }
  std::size_t block_offset(std::size_t i) const { return stacked_->block_offset(i); }
  const StackedMap& stacked() const { return *stacked_; }
  std::shared_ptr<const StackedMap> stacked_ptr() const { return stacked_; }
  /// Stacked offset vector (the b in A x - b).
  const std::vector<double>& offsets() const { return offsets_; }

  /// f(x) given a precomputed ax = stacked().forward(x). May be +infinity
  /// for indicator-type blocks, never NaN.
  double objective_from_ax(std::span<const double> ax) const;
  double objective(std::span<const double> x) const;

  /// Hash of sizes, weights, offsets and prox parameters; keys the
  /// reference cache.
  std::uint64_t content_hash() const;

 private:
  int n_;
  std::vector<SplitBlock> blocks_;
  std::shared_ptr<const StackedMap> stacked_;
  std::vector<double> offsets_;
};

/// Splitting-step configuration. The implicit metric is
///   M = gamma I + alpha C        when mask is set (C = circulant with mask h)
///   M = gamma I                  otherwise,
/// and the x-update applies the pseudoinverse of M. The test hooks override
/// both applications with explicit operators.
struct SolverConfig {
  double alpha = 1.0;
  double gamma = 0.0;
  std::optional<SpectralMask> mask;
  int max_iters = 100;
  int record_every = 1;
  double pinv_rel_tol = 1e-12;
  std::uint64_t seed = 0;
  /// Power-method screen of the step condition M >= alpha A^T A at solve
  /// start; violations are reported as warnings, not errors.
  bool check_step_condition = true;
  std::shared_ptr<const LinearMap> m_pinv_override;
  std::shared_ptr<const LinearMap> m_override;
};

struct SolverState {
  ImageGrid x;
  std::vector<double> u;
  std::int64_t iter = 0;
};

SolverState make_state(const SplitProblem& prob);

struct RecordRow {
  std::int64_t iter = 0;
  double objective = 0.0;
  double rel_subopt = 0.0;
  double seminorm_step = 0.0;
  double wall_ms = 0.0;
};

struct ConvergenceRecord {
  std::vector<RecordRow> rows;
  std::vector<std::string> warnings;
};

struct SolveResult {
  SolverState state;
  ConvergenceRecord record;
  double objective = 0.0;
};

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(std::int64_t iter, const std::string& what);
  std::int64_t iter;
};

/// One splitting iteration in place:
///   x <- x - M^+ A^T u
///   u <- prox_{alpha g*}(u + alpha (A (2 x_new - x_old) - b)).
void ncs_step(SolverState& state, const SplitProblem& prob, const SolverConfig& cfg);

/// Run the splitting iteration for cfg.max_iters iterations from init (zeros
/// when null). rel_subopt in the record is (f - f_star) / max(1, |f_star|)
/// against *f_star when given, otherwise against the smallest objective seen
/// during this run.
SolveResult ncs_solve(const SplitProblem& prob, const SolverConfig& cfg,
                      const double* f_star = nullptr, const SolverState* init = nullptr);

/// Same template with M = gamma I (cfg.mask must be empty); this is PDHG.
SolveResult pdhg_solve(const SplitProblem& prob, const SolverConfig& cfg,
                       const double* f_star = nullptr, const SolverState* init = nullptr);

/// Same template with M = alpha A^T A, the x-update solved approximately by
/// n_cg conjugate-gradient iterations on the normal equations. Record rows
/// count cumulative CG iterations, not outer iterations.
SolveResult admm_cg_solve(const SplitProblem& prob, const SolverConfig& cfg, int n_cg,
                          const double* f_star = nullptr,
                          const SolverState* init = nullptr);

/// n_iters conjugate-gradient iterations for sym_op x = rhs from x = 0.
/// sym_op must be symmetric positive semidefinite with rhs in its range.
std::vector<double> cg(const LinearMap& sym_op, std::span<const double> rhs, int n_iters);

/// Power iteration estimate of the largest eigenvalue of a symmetric map.
double power_method(const LinearMap& sym_op, int n_iters, std::uint64_t seed);

/// Splitting seminorm
///   D(dx, du)^2 = ||du - alpha A dx||^2 + alpha <dx, M dx> - alpha^2 ||A dx||^2.
/// A radicand that is negative beyond roundoff means the step condition
/// fails; tiny negative values are clamped to zero.
double seminorm_D(std::span<const double> dx, std::span<const double> du,
                  const SplitProblem& prob, const SolverConfig& cfg);

/// Guaranteed suboptimality of the iterate after k+1 steps from (x0, u0),
/// given a saddle point (x_star, u_star) and a Lipschitz constant of g:
///   (1 / (alpha sqrt(k+1))) *
///   (||u0 - u_star - alpha A (x0 - x_star)|| + ||u_star|| + L
///    + ||x0 - x_star||_{alpha M - alpha^2 A^T A})^2.
double rate_bound(std::int64_t k, std::span<const double> x0, std::span<const double> u0,
                  std::span<const double> x_star, std::span<const double> u_star,
                  double lip_g, const SplitProblem& prob, const SolverConfig& cfg);

struct Reference {
  ImageGrid x;
  std::vector<double> u;
  double objective = 0.0;
  bool converged = true;
};

/// Long splitting run that stands in for the exact solution. When cache_dir
/// is nonempty the result is persisted keyed by the problem and
/// configuration, and reloaded on the next call.
Reference compute_reference(const SplitProblem& prob, const SolverConfig& cfg,
                            std::int64_t ref_iters, const std::string& cache_dir = "");

}  // namespace ncstomo
