#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "ncstomo/dense.hpp"
#include "ncstomo/grad.hpp"
#include "ncstomo/radon.hpp"
#include "ncstomo/solvers.hpp"
#include "test_support.hpp"

using namespace ncstomo;

namespace {

Eigen::VectorXd to_eigen(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

double rel_linf(std::span<const double> got, const Eigen::VectorXd& want) {
  double diff = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    diff = std::max(diff, std::abs(got[i] - want[static_cast<Eigen::Index>(i)]));
    scale = std::max(scale, std::abs(want[static_cast<Eigen::Index>(i)]));
  }
  return diff / scale;
}

double norm(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc);
}

/// min_x 1/2 ||E x - b||^2 + lambda ||D x||_1 in stacked form: block 0 is
/// (weight 1, E, quadratic, b), block 1 is (weight beta/alpha, D, box at
/// lambda*alpha/beta, 0).
struct TvInstance {
  int n = 0;
  double alpha = 0.0, beta = 0.0, lambda = 0.0;
  std::shared_ptr<RadonMap> radon;
  std::shared_ptr<GradMap> grad;
  std::vector<double> b;
  std::unique_ptr<SplitProblem> prob;
  std::size_t m = 0;

  double bound() const { return lambda * alpha / beta; }

  /// prox_{alpha g*} of the stacked dual, written out from the two formulas.
  void prox_stacked(Eigen::VectorXd& z) const {
    for (std::size_t i = 0; i < m; ++i) z[static_cast<Eigen::Index>(i)] /= 1.0 + alpha;
    double bd = bound();
    for (std::size_t i = m; i < static_cast<std::size_t>(z.size()); ++i) {
      double& v = z[static_cast<Eigen::Index>(i)];
      v = v < -bd ? -bd : (v > bd ? bd : v);
    }
  }
};

TvInstance make_tv(int n, int n_angles, double alpha, double beta, double lambda,
                   std::uint64_t seed) {
  TvInstance t;
  t.n = n;
  t.alpha = alpha;
  t.beta = beta;
  t.lambda = lambda;
  t.radon = std::make_shared<RadonMap>(n, n_angles, default_detector_count(n));
  t.grad = std::make_shared<GradMap>(n);
  std::vector<double> x_true = testsupport::rand_vec(static_cast<std::size_t>(n) * n, seed);
  t.b = forward(*t.radon, x_true);
  RngStream noise(seed, 1);
  for (double& v : t.b) v += 0.05 * noise.next_normal();
  t.m = t.b.size();
  std::vector<SplitBlock> blocks;
  blocks.push_back({1.0, t.radon, std::make_shared<QuadraticConj>(), t.b});
  blocks.push_back(
      {beta / alpha, t.grad, std::make_shared<ScaledL1Conj>(lambda * alpha / beta), {}});
  t.prob = std::make_unique<SplitProblem>(n, std::move(blocks));
  return t;
}

/// Appendix two-step form: v advances from the previous two x iterates, then
/// x moves along the pseudoinverse direction. Dense throughout.
struct TwoStepOracle {
  Eigen::MatrixXd a, p;
  Eigen::VectorXd b;
  double alpha = 0.0;
  std::vector<Eigen::VectorXd> xs, vs;

  /// Records x^0..x^iters and v^1..v^{iters+1}, starting from x^{-1} = x^0.
  template <typename Prox>
  void run(const Eigen::VectorXd& x0, const Eigen::VectorXd& v0, int iters, Prox prox) {
    xs.assign(1, x0);
    vs.assign(1, v0);
    Eigen::VectorXd x = x0, x_prev = x0, v = v0;
    for (int k = 1; k <= iters + 1; ++k) {
      Eigen::VectorXd z = v + alpha * (a * (2.0 * x - x_prev) - b);
      prox(z);
      v = z;
      vs.push_back(v);
      Eigen::VectorXd xn = x - (1.0 / alpha) * (p * (a.transpose() * v));
      x_prev = x;
      x = xn;
      if (k <= iters) xs.push_back(x);
    }
  }
};

/// Calibrated measurement-plus-laplacian mask for a TV instance, and the
/// smallest identity shift that provably restores M >= alpha A^T A: gamma a
/// hair above alpha * lambda_max(A^T A - C), found densely.
struct MaskedMetric {
  SpectralMask c;
  double gamma = 0.0;
  Eigen::MatrixXd a_dense, m_dense;
};

MaskedMetric masked_metric(const TvInstance& t, std::uint64_t seed) {
  MaskedMetric mm;
  NormalMap nm(t.radon);
  double s = calibrate_scale(nm, radon_mask(t.n, 1.0, 1.0), 4, seed);
  double w = t.beta / t.alpha;
  mm.c = radon_mask(t.n, s, 0.1 * s) + (w * w) * laplacian_mask_2d(t.n);
  mm.a_dense = dense_map(t.prob->stacked());
  Eigen::MatrixXd cd = testsupport::dense_circulant(mm.c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> gap(
      mm.a_dense.transpose() * mm.a_dense - cd);
  mm.gamma = 1.05 * t.alpha * std::max(gap.eigenvalues().maxCoeff(), 0.0) + 1e-9;
  mm.m_dense = mm.gamma * Eigen::MatrixXd::Identity(cd.rows(), cd.cols()) +
               t.alpha * cd;
  return mm;
}

/// Shared 16x16 instance with a calibrated mask and a long reference run;
/// built once for the convergence-behavior tests.
struct Bundle {
  TvInstance t;
  SolverConfig cfg;
  Reference ref;
  Eigen::MatrixXd a_dense;
  Eigen::MatrixXd m_dense;
};

const Bundle& bundle() {
  static Bundle b = [] {
    Bundle z{make_tv(16, 24, 0.02, 0.02, 0.3, 404), {}, {}, {}, {}};
    MaskedMetric mm = masked_metric(z.t, 505);
    z.cfg.alpha = z.t.alpha;
    z.cfg.gamma = mm.gamma;
    z.cfg.mask = mm.c;
    z.ref = compute_reference(*z.t.prob, z.cfg, 50000);
    z.a_dense = std::move(mm.a_dense);
    z.m_dense = std::move(mm.m_dense);
    return z;
  }();
  return b;
}

/// D(dx, du) straight from the block matrix, dense.
double seminorm_oracle(const Eigen::VectorXd& dx, const Eigen::VectorXd& du,
                       const Eigen::MatrixXd& a, const Eigen::MatrixXd& m, double alpha) {
  Eigen::VectorXd adx = a * dx;
  double t1 = (du - alpha * adx).squaredNorm();
  double rad = t1 + alpha * dx.dot(m * dx) - alpha * alpha * adx.squaredNorm();
  return std::sqrt(std::max(rad, 0.0));
}

}  // namespace

TEST_CASE("stacked objective equals the plain data-plus-tv objective") {
  TvInstance t = make_tv(8, 10, 0.01, 0.03, 0.7, 11);
  std::vector<double> x = testsupport::rand_vec(64, 12);
  std::vector<double> ex = forward(*t.radon, x);
  std::vector<double> dx = forward(*t.grad, x);
  double quad = 0.0;
  for (std::size_t i = 0; i < ex.size(); ++i) quad += (ex[i] - t.b[i]) * (ex[i] - t.b[i]);
  double tv = 0.0;
  for (double v : dx) tv += std::abs(v);
  double want = 0.5 * quad + t.lambda * tv;
  CHECK(std::abs(t.prob->objective(x) - want) <= 1e-12 * std::max(1.0, want));
}

TEST_CASE("first step from a zero dual leaves x alone and fires u from the offsets") {
  TvInstance t = make_tv(8, 10, 0.05, 0.05, 0.4, 21);
  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.gamma = 2.0;
  SolverState s = make_state(*t.prob);
  ncs_step(s, *t.prob, cfg);
  for (double v : s.x.v) CHECK(v == 0.0);
  for (std::size_t i = 0; i < t.m; ++i)
    CHECK(s.u[i] == doctest::Approx(-t.alpha * t.b[i] / (1.0 + t.alpha)).epsilon(1e-14));
  for (std::size_t i = t.m; i < s.u.size(); ++i) CHECK(s.u[i] == 0.0);
}

TEST_CASE("unmasked splitting steps track an independently coded pdhg") {
  TvInstance t = make_tv(16, 12, 0.01, 0.01, 0.3, 101);
  double gamma = 3.0;
  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.gamma = gamma;
  SolverState s = make_state(*t.prob);

  // x <- x - tau A^T u; u <- prox_{alpha g*}(u + alpha (A (2 x_new - x_old) - b))
  const StackedMap& a = t.prob->stacked();
  const std::vector<double>& b = t.prob->offsets();
  double tau = 1.0 / gamma;
  std::vector<double> x(a.domain_size(), 0.0), u(a.range_size(), 0.0);
  std::vector<double> atu(x.size()), lead(x.size()), alead(u.size());

  double worst = 0.0;
  for (int k = 1; k <= 50; ++k) {
    ncs_step(s, *t.prob, cfg);

    a.adjoint(u, atu);
    for (std::size_t j = 0; j < x.size(); ++j) {
      double xn = x[j] - tau * atu[j];
      lead[j] = 2.0 * xn - x[j];
      x[j] = xn;
    }
    a.forward(lead, alead);
    Eigen::VectorXd z(static_cast<Eigen::Index>(u.size()));
    for (std::size_t i = 0; i < u.size(); ++i)
      z[static_cast<Eigen::Index>(i)] = u[i] + t.alpha * (alead[i] - b[i]);
    t.prox_stacked(z);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = z[static_cast<Eigen::Index>(i)];

    worst = std::max(worst, rel_linf(s.x.v, to_eigen(x)));
    worst = std::max(worst, rel_linf(s.u, to_eigen(u)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("dense exact metric reproduces the appendix two-step iteration") {
  TvInstance t = make_tv(16, 12, 0.05, 0.05, 0.3, 202);
  TwoStepOracle o;
  o.a = dense_map(t.prob->stacked());
  o.b = to_eigen(t.prob->offsets());
  o.alpha = t.alpha;
  Eigen::MatrixXd ata = o.a.transpose() * o.a;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ata);
  o.p = cod.pseudoInverse();

  Eigen::VectorXd x0 = to_eigen(testsupport::rand_vec(t.prob->domain_size(), 203));
  Eigen::VectorXd v0 = to_eigen(testsupport::rand_vec(t.prob->range_size(), 204));
  int iters = 20;
  o.run(x0, v0, iters, [&](Eigen::VectorXd& z) { t.prox_stacked(z); });

  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.m_pinv_override = std::make_shared<DenseMap>((1.0 / t.alpha) * o.p);
  cfg.m_override = std::make_shared<DenseMap>(t.alpha * ata);
  SolverState s = make_state(*t.prob);
  s.x.v = to_std(x0);
  s.u = to_std(o.vs[1]);

  double worst = 0.0;
  for (int k = 1; k <= iters; ++k) {
    ncs_step(s, *t.prob, cfg);
    worst = std::max(worst, rel_linf(s.x.v, o.xs[static_cast<std::size_t>(k)]));
    worst = std::max(worst, rel_linf(s.u, o.vs[static_cast<std::size_t>(k) + 1]));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("cg x-updates with enough inner iterations match the exact two-step form") {
  // 12 dense measurements of a 4x4 image: the normal matrix has rank 12, so
  // 16 cg iterations reproduce the pseudoinverse direction.
  int dim = 16;
  std::vector<double> entries = testsupport::rand_vec(12 * static_cast<std::size_t>(dim), 301);
  Eigen::MatrixXd am(12, dim);
  for (int r = 0; r < 12; ++r)
    for (int c = 0; c < dim; ++c) am(r, c) = entries[static_cast<std::size_t>(r) * dim + c];
  std::vector<double> b = testsupport::rand_vec(12, 302);
  double alpha = 0.7;
  std::vector<SplitBlock> blocks;
  blocks.push_back({1.0, std::make_shared<DenseMap>(am), std::make_shared<QuadraticConj>(), b});
  SplitProblem prob(4, std::move(blocks));

  TwoStepOracle o;
  o.a = am;
  o.b = to_eigen(b);
  o.alpha = alpha;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(am.transpose() * am);
  o.p = cod.pseudoInverse();
  Eigen::VectorXd x0 = to_eigen(testsupport::rand_vec(dim, 303));
  auto prox = [&](Eigen::VectorXd& z) { z /= 1.0 + alpha; };
  int iters = 20;
  o.run(x0, Eigen::VectorXd::Zero(12), iters, prox);

  SolverState init = make_state(prob);
  init.x.v = to_std(x0);
  init.u = to_std(o.vs[1]);
  double worst = 0.0;
  for (int j = 1; j <= iters; ++j) {
    SolverConfig cfg;
    cfg.alpha = alpha;
    cfg.max_iters = j;
    SolveResult res = admm_cg_solve(prob, cfg, dim, nullptr, &init);
    worst = std::max(worst, rel_linf(res.state.x.v, o.xs[static_cast<std::size_t>(j)]));
    worst = std::max(worst, rel_linf(res.state.u, o.vs[static_cast<std::size_t>(j) + 1]));
    if (j == iters)
      CHECK(res.record.rows.back().iter == static_cast<std::int64_t>(j) * dim);
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("cg record axis counts inner iterations and a zero dual keeps x still") {
  TvInstance t = make_tv(8, 10, 0.5, 0.5, 0.2, 31);
  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.max_iters = 5;
  SolveResult res = admm_cg_solve(*t.prob, cfg, 10);
  REQUIRE(res.record.rows.size() == 6);
  for (std::size_t i = 0; i < res.record.rows.size(); ++i)
    CHECK(res.record.rows[i].iter == static_cast<std::int64_t>(i) * 10);

  cfg.max_iters = 1;
  SolveResult one = admm_cg_solve(*t.prob, cfg, 10);
  for (double v : one.state.x.v) CHECK(v == 0.0);
}

TEST_CASE("cg solves identity in one step, spd systems in n, and rhs zero to zero") {
  IdentityMap id(9);
  std::vector<double> rhs = testsupport::rand_vec(9, 41);
  std::vector<double> got = cg(id, rhs, 1);
  for (std::size_t i = 0; i < rhs.size(); ++i) CHECK(got[i] == rhs[i]);

  std::vector<double> ge = testsupport::rand_vec(64, 42);
  Eigen::MatrixXd g(8, 8);
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) g(r, c) = ge[static_cast<std::size_t>(r) * 8 + c];
  Eigen::MatrixXd s = g.transpose() * g + Eigen::MatrixXd::Identity(8, 8);
  DenseMap smap(s);
  std::vector<double> r8 = testsupport::rand_vec(8, 43);
  std::vector<double> x8 = cg(smap, r8, 8);
  Eigen::VectorXd want = s.ldlt().solve(to_eigen(r8));
  CHECK(rel_linf(x8, want) <= 1e-8);

  std::vector<double> zero(8, 0.0);
  for (double v : cg(smap, zero, 8)) CHECK(v == 0.0);
}

TEST_CASE("cg from zero lands on the pseudoinverse solution of a singular system") {
  std::vector<double> ge = testsupport::rand_vec(40, 44);
  Eigen::MatrixXd g(5, 8);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 8; ++c) g(r, c) = ge[static_cast<std::size_t>(r) * 8 + c];
  Eigen::MatrixXd s = g.transpose() * g;
  Eigen::VectorXd y = to_eigen(testsupport::rand_vec(8, 45));
  Eigen::VectorXd rhs = s * y;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(s);
  Eigen::VectorXd want = cod.pseudoInverse() * rhs;
  std::vector<double> got = cg(DenseMap(s), to_std(rhs), 8);
  CHECK(rel_linf(got, want) <= 1e-8);
}

TEST_CASE("power method matches dense eigenvalues and the laplacian mask maximum") {
  Eigen::MatrixXd three = 3.0 * Eigen::MatrixXd::Identity(6, 6);
  CHECK(std::abs(power_method(DenseMap(three), 5, 1) - 3.0) <= 1e-10);

  std::vector<double> ge = testsupport::rand_vec(100, 46);
  Eigen::MatrixXd g(10, 10);
  for (int r = 0; r < 10; ++r)
    for (int c = 0; c < 10; ++c) g(r, c) = ge[static_cast<std::size_t>(r) * 10 + c];
  Eigen::MatrixXd s = g.transpose() * g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  double lmax = eig.eigenvalues().maxCoeff();
  CHECK(std::abs(power_method(DenseMap(s), 200, 2) - lmax) <= 0.01 * lmax);

  struct MaskMap final : LinearMap {
    SpectralMask c;
    MaskApplier fft;
    explicit MaskMap(SpectralMask m) : c(std::move(m)), fft(c.n) {}
    std::size_t domain_size() const override { return c.h.size(); }
    std::size_t range_size() const override { return c.h.size(); }
    void forward(std::span<const double> x, std::span<double> out) const override {
      fft.apply(c, x, out);
    }
    void adjoint(std::span<const double> u, std::span<double> out) const override {
      fft.apply(c, u, out);
    }
  } lap(laplacian_mask_2d(16));
  CHECK(std::abs(power_method(lap, 200, 3) - 8.0) <= 0.08);
}

TEST_CASE("splitting seminorm matches the dense block quadratic form") {
  TvInstance t = make_tv(8, 10, 0.03, 0.06, 0.5, 51);
  NormalMap nm(t.radon);
  double s = calibrate_scale(nm, radon_mask(8, 1.0, 1.0), 4, 52);
  double w = t.beta / t.alpha;
  SpectralMask c = radon_mask(8, s, 0.1 * s) + (w * w) * laplacian_mask_2d(8);
  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.gamma = 1.0;
  cfg.mask = c;

  Eigen::MatrixXd a = dense_map(t.prob->stacked());
  Eigen::MatrixXd m = cfg.gamma * Eigen::MatrixXd::Identity(64, 64) +
                      cfg.alpha * testsupport::dense_circulant(c);
  for (std::uint64_t seed = 60; seed < 66; ++seed) {
    Eigen::VectorXd dx = to_eigen(testsupport::rand_vec(64, seed));
    Eigen::VectorXd du = to_eigen(testsupport::rand_vec(t.prob->range_size(), seed + 100));
    double got = seminorm_D(to_std(dx), to_std(du), *t.prob, cfg);
    double want = seminorm_oracle(dx, du, a, m, cfg.alpha);
    CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, want));
  }

  SUBCASE("zero dx reduces to the dual norm") {
    Eigen::VectorXd du = to_eigen(testsupport::rand_vec(t.prob->range_size(), 70));
    std::vector<double> dx0(64, 0.0);
    CHECK(seminorm_D(dx0, to_std(du), *t.prob, cfg) ==
          doctest::Approx(du.norm()).epsilon(1e-13));
  }

  SUBCASE("du = alpha A dx vanishes under the exact metric") {
    Eigen::MatrixXd ata = a.transpose() * a;
    SolverConfig exact;
    exact.alpha = t.alpha;
    exact.m_pinv_override =
        std::make_shared<DenseMap>((1.0 / t.alpha) * pinv_svd(ata));
    exact.m_override = std::make_shared<DenseMap>(t.alpha * ata);
    Eigen::VectorXd dx = to_eigen(testsupport::rand_vec(64, 71));
    Eigen::VectorXd du = t.alpha * (a * dx);
    double got = seminorm_D(to_std(dx), to_std(du), *t.prob, exact);
    CHECK(got <= 1e-5 * du.norm());
  }

  SUBCASE("a metric far below alpha AtA is reported, not silently clamped") {
    SolverConfig weak;
    weak.alpha = t.alpha;
    weak.gamma = 1e-9;
    Eigen::VectorXd dx = to_eigen(testsupport::rand_vec(64, 72));
    Eigen::VectorXd du = t.alpha * (a * dx);
    CHECK_THROWS_AS(seminorm_D(to_std(dx), to_std(du), *t.prob, weak), std::runtime_error);
  }
}

TEST_CASE("rate bound closed form at the saddle point and monotone in k") {
  const Bundle& bd = bundle();
  std::vector<double> xs = bd.ref.x.v, us = bd.ref.u;
  double l = bd.t.lambda * std::sqrt(static_cast<double>(bd.t.grad->range_size()));
  double us_norm = norm(us);
  double prev = kInf;
  for (std::int64_t k : {0, 1, 2, 5, 10, 100}) {
    double got = rate_bound(k, xs, us, xs, us, l, *bd.t.prob, bd.cfg);
    double want = (us_norm + l) * (us_norm + l) /
                  (bd.cfg.alpha * std::sqrt(static_cast<double>(k + 1)));
    CHECK(std::abs(got - want) <= 1e-12 * want);
    CHECK(got <= prev);
    prev = got;
  }
}

TEST_CASE("step and distance seminorms shrink monotonically at the stated rates") {
  const Bundle& bd = bundle();
  const Eigen::MatrixXd& a = bd.a_dense;
  const Eigen::MatrixXd& m = bd.m_dense;
  Eigen::VectorXd xr = to_eigen(bd.ref.x.v), ur = to_eigen(bd.ref.u);

  SolverState s = make_state(*bd.t.prob);
  Eigen::VectorXd x_prev = to_eigen(s.x.v), u_prev = to_eigen(s.u);
  double d0 = seminorm_oracle(x_prev - xr, u_prev - ur, a, m, bd.cfg.alpha);
  double prev_step = kInf, prev_dist = d0;
  for (int k = 0; k < 200; ++k) {
    ncs_step(s, *bd.t.prob, bd.cfg);
    Eigen::VectorXd x = to_eigen(s.x.v), u = to_eigen(s.u);
    double step = seminorm_oracle(x - x_prev, u - u_prev, a, m, bd.cfg.alpha);
    double dist = seminorm_oracle(x - xr, u - ur, a, m, bd.cfg.alpha);
    CHECK(step <= prev_step * (1.0 + 1e-9));
    CHECK(dist <= prev_dist * (1.0 + 1e-9));
    CHECK(step * step <= d0 * d0 / (k + 1) + 1e-9);
    prev_step = step;
    prev_dist = dist;
    x_prev = x;
    u_prev = u;
  }
}

TEST_CASE("long runs close in on the reference from both solvers") {
  const Bundle& bd = bundle();
  SolverConfig cfg = bd.cfg;
  cfg.max_iters = 10000;
  cfg.record_every = 1000;
  SolveResult res = ncs_solve(*bd.t.prob, cfg, &bd.ref.objective);
  std::vector<double> dx(res.state.x.v), du(res.state.u);
  for (std::size_t i = 0; i < dx.size(); ++i) dx[i] -= bd.ref.x.v[i];
  for (std::size_t i = 0; i < du.size(); ++i) du[i] -= bd.ref.u[i];
  CHECK(norm(dx) <= 1e-5);
  CHECK(norm(du) <= 1e-5);
  CHECK(res.record.warnings.empty());

  // pdhg on the same problem, step sized from the operator norm
  double lmax = power_method(NormalMap(bd.t.prob->stacked_ptr()), 120, 7);
  SolverConfig pd;
  pd.alpha = bd.t.alpha;
  pd.gamma = 1.05 * pd.alpha * lmax;
  pd.max_iters = 30000;
  pd.record_every = 5000;
  SolveResult pres = pdhg_solve(*bd.t.prob, pd, &bd.ref.objective);
  CHECK(std::abs(pres.objective - bd.ref.objective) <=
        1e-6 * std::max(1.0, std::abs(bd.ref.objective)));
}

TEST_CASE("reference objective undercuts every recorded objective") {
  const Bundle& bd = bundle();
  SolverConfig cfg = bd.cfg;
  cfg.max_iters = 500;
  cfg.record_every = 50;
  SolveResult a = ncs_solve(*bd.t.prob, cfg, &bd.ref.objective);

  double lmax = power_method(NormalMap(bd.t.prob->stacked_ptr()), 120, 7);
  SolverConfig pd;
  pd.alpha = bd.t.alpha;
  pd.gamma = 1.05 * pd.alpha * lmax;
  pd.max_iters = 500;
  pd.record_every = 50;
  SolveResult b = pdhg_solve(*bd.t.prob, pd, &bd.ref.objective);

  SolverConfig ad;
  ad.alpha = 1.0;
  ad.max_iters = 50;
  ad.record_every = 5;
  SolveResult c = admm_cg_solve(*bd.t.prob, ad, 10, &bd.ref.objective);

  for (const SolveResult* r : {&a, &b, &c}) {
    for (const auto& row : r->record.rows) {
      CHECK(bd.ref.objective <= row.objective + 1e-9);
      CHECK(row.rel_subopt ==
            doctest::Approx((row.objective - bd.ref.objective) /
                            std::max(1.0, std::abs(bd.ref.objective))));
    }
  }

  std::int64_t prev = -1;
  for (const auto& row : a.record.rows) {
    CHECK(row.iter > prev);
    prev = row.iter;
  }
  CHECK(a.record.rows.front().iter == 0);
  CHECK(a.record.rows.back().iter == 500);
  CHECK(a.record.rows.back().objective == a.objective);
}

TEST_CASE("a near-fixed point barely moves under one step") {
  TvInstance t = make_tv(8, 12, 0.05, 0.05, 0.3, 81);
  MaskedMetric mm = masked_metric(t, 82);
  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.gamma = mm.gamma;
  cfg.mask = mm.c;
  Reference ref = compute_reference(*t.prob, cfg, 50000);
  CHECK(ref.converged);

  SolverState st;
  st.x = ref.x;
  st.u = ref.u;
  ncs_step(st, *t.prob, cfg);
  std::vector<double> du(st.u);
  for (std::size_t i = 0; i < du.size(); ++i) du[i] -= ref.u[i];
  CHECK(norm(du) <= 1e-6 * std::max(1.0, norm(ref.u)));
}

TEST_CASE("reference runs are deterministic and cache round-trips bitwise") {
  TvInstance t = make_tv(8, 10, 0.05, 0.05, 0.3, 91);
  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.gamma = 1.05 * t.alpha * power_method(NormalMap(t.prob->stacked_ptr()), 150, 92);
  cfg.mask = laplacian_mask_2d(8);

  Reference r1 = compute_reference(*t.prob, cfg, 300);
  Reference r2 = compute_reference(*t.prob, cfg, 300);
  CHECK(r1.objective == r2.objective);
  CHECK(r1.x.v == r2.x.v);
  CHECK(r1.u == r2.u);

  auto dir = std::filesystem::temp_directory_path() /
             ("ncstomo_ref_cache_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  Reference w1 = compute_reference(*t.prob, cfg, 300, dir.string());
  Reference w2 = compute_reference(*t.prob, cfg, 300, dir.string());
  CHECK(w1.x.v == r1.x.v);
  CHECK(w2.x.v == r1.x.v);
  CHECK(w2.u == r1.u);
  CHECK(w2.objective == r1.objective);
  CHECK(w2.converged == w1.converged);
  std::size_t files = 0;
  for (auto it = std::filesystem::directory_iterator(dir);
       it != std::filesystem::directory_iterator(); ++it)
    ++files;
  CHECK(files == 1);
  std::filesystem::remove_all(dir);

  Reference shortrun = compute_reference(*t.prob, cfg, 10);
  CHECK_FALSE(shortrun.converged);
}

TEST_CASE("solve accepts an initial state and replays the stepwise path") {
  TvInstance t = make_tv(8, 10, 0.05, 0.05, 0.3, 95);
  SolverConfig cfg;
  cfg.alpha = t.alpha;
  cfg.gamma = 1.05 * t.alpha * power_method(NormalMap(t.prob->stacked_ptr()), 150, 96);
  cfg.mask = laplacian_mask_2d(8);
  SolverState init = make_state(*t.prob);
  init.x.v = testsupport::rand_vec(init.x.v.size(), 96);
  init.u = testsupport::rand_vec(init.u.size(), 97);

  cfg.max_iters = 5;
  SolveResult res = ncs_solve(*t.prob, cfg, nullptr, &init);
  SolverState manual = init;
  manual.iter = 0;
  for (int k = 0; k < 5; ++k) ncs_step(manual, *t.prob, cfg);
  CHECK(res.state.x.v == manual.x.v);
  CHECK(res.state.u == manual.u);
  CHECK(res.state.iter == 5);
}

TEST_CASE("a wildly undersized gamma is flagged and then blows up") {
  std::vector<SplitBlock> blocks;
  std::vector<double> b = testsupport::rand_vec(16, 98);
  blocks.push_back({10.0, std::make_shared<IdentityMap>(16), std::make_shared<QuadraticConj>(), b});
  SplitProblem prob(4, std::move(blocks));

  SolverConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 1.0;
  cfg.max_iters = 1;
  SolveResult one = pdhg_solve(prob, cfg);
  REQUIRE_FALSE(one.record.warnings.empty());
  CHECK(one.record.warnings.front().find("step condition") != std::string::npos);

  cfg.max_iters = 100000;
  cfg.record_every = 1000;
  CHECK_THROWS_AS(pdhg_solve(prob, cfg), DivergenceError);
}

TEST_CASE("pdhg on an identity block recovers the offset") {
  std::vector<double> b = testsupport::rand_vec(16, 99);
  std::vector<SplitBlock> blocks;
  blocks.push_back({1.0, std::make_shared<IdentityMap>(16), std::make_shared<QuadraticConj>(), b});
  SplitProblem prob(4, std::move(blocks));
  SolverConfig cfg;
  cfg.alpha = 1.0;
  cfg.gamma = 1.5;
  cfg.max_iters = 2000;
  cfg.record_every = 500;
  SolveResult res = pdhg_solve(prob, cfg);
  CHECK(res.record.warnings.empty());
  CHECK(rel_linf(res.state.x.v, to_eigen(b)) <= 1e-6);

  SolverConfig masked = cfg;
  masked.mask = laplacian_mask_2d(4);
  CHECK_THROWS_AS(pdhg_solve(prob, masked), std::invalid_argument);
  CHECK_THROWS_AS(admm_cg_solve(prob, masked, 4), std::invalid_argument);
}
