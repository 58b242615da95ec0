#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mgmc/solver.hpp"
#include "support/instances.hpp"
#include "support/oracle.hpp"

using namespace mgmc;

TEST_CASE("power-ball projection: interior, boundary overshoot, origin, idempotence") {
  rng::Stream s(61, 1);
  const double p_t = 4.0;  // budget 2
  CVector f(6);
  for (int i = 0; i < 6; ++i) f[i] = s.cnormal();

  const CVector interior = f * (1.0 / f.norm());  // norm 1 < 2
  CHECK((project_power_ball(interior, p_t) - interior).norm() == 0.0);

  const CVector outside = f * (4.0 / f.norm());  // norm 4 = 2*sqrt(P_t)
  const CVector projected = project_power_ball(outside, p_t);
  CHECK((projected - outside / 2.0).norm() < 1e-12);
  CHECK(projected.norm() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((project_power_ball(projected, p_t) - projected).norm() < 1e-12);

  CHECK(project_power_ball(CVector::Zero(6), p_t).norm() == 0.0);
}

TEST_CASE("power-ball projection is nonexpansive toward feasible points") {
  rng::Stream s(62, 1);
  const double p_t = 2.5;
  for (int trial = 0; trial < 200; ++trial) {
    CVector x(4), y(4);
    for (int i = 0; i < 4; ++i) {
      x[i] = 3.0 * s.cnormal();
      y[i] = s.cnormal();
    }
    y = project_power_ball(y, p_t);  // feasible reference
    const CVector px = project_power_ball(x, p_t);
    CHECK((px - y).norm() <= (x - y).norm() + 1e-12);
  }
}

TEST_CASE("unit-modulus projection: worked entry, idempotence, zero tie-break") {
  CVector theta(3);
  theta[0] = Complex(3.0, 4.0);
  theta[1] = Complex(0.0, 0.0);
  theta[2] = std::polar(1.0, 2.1);
  const CVector p = project_unit_modulus(theta);
  CHECK(p[0].real() == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[0].imag() == doctest::Approx(0.8).epsilon(1e-15));
  CHECK(p[1] == Complex(1.0, 0.0));
  CHECK(std::abs(p[2] - theta[2]) == 0.0);

  const CVector pp = project_unit_modulus(p);
  CHECK((pp - p).norm() < 1e-15);
}

TEST_CASE("unit-modulus projection picks the closest point on the circle") {
  rng::Stream s(63, 1);
  for (int trial = 0; trial < 100; ++trial) {
    CVector theta(1);
    theta[0] = 2.0 * s.cnormal();
    const Complex projected = project_unit_modulus(theta)[0];
    for (int probe = 0; probe < 32; ++probe) {
      const Complex u = std::polar(1.0, s.uniform(0.0, 2.0 * M_PI));
      CHECK(std::abs(projected - theta[0]) <= std::abs(u - theta[0]) + 1e-12);
    }
  }
}

TEST_CASE("line search accepts the initial step at a stationary point") {
  const auto obj = [](const CVector& x) { return -x.squaredNorm(); };
  const auto identity = [](const CVector& x) { return x; };
  const CVector x = CVector::Zero(3);
  const auto res = armijo_search(obj, x, 0.0, CVector::Zero(3), identity, 0.7, 1e-4, 0.5);
  CHECK(res.alpha == 0.7);
  CHECK((res.x_next - x).norm() == 0.0);
  CHECK(res.obj_next == 0.0);
}

TEST_CASE("line search on a concave quadratic satisfies the acceptance inequality") {
  // obj(x) = -|x - 1|^2, gradient at 0 under the conjugate convention is 1.
  const auto obj = [](const CVector& x) { return -std::norm(x[0] - Complex(1.0, 0.0)); };
  const auto identity = [](const CVector& x) { return x; };
  CVector x = CVector::Zero(1);
  CVector grad(1);
  grad[0] = Complex(1.0, 0.0);
  const double c = 1e-4;
  const auto res = armijo_search(obj, x, obj(x), grad, identity, 1.0, c, 0.5);
  CHECK(res.alpha > 0.0);
  const double gain = res.obj_next - obj(x);
  const double step_sq = (res.x_next - x).squaredNorm();
  CHECK(gain >= (c / res.alpha) * step_sq);
  CHECK(res.x_next[0].real() == doctest::Approx(1.0));  // full step reaches the maximizer
}

TEST_CASE("line search stalls on a strictly decreasing objective") {
  const auto obj = [](const CVector& x) { return -x.norm(); };
  const auto identity = [](const CVector& x) { return x; };
  CVector x = CVector::Zero(2);
  CVector grad = CVector::Zero(2);
  grad[0] = 1.0;
  const auto res = armijo_search(obj, x, 0.0, grad, identity, 1.0, 1e-4, 0.5);
  CHECK(res.alpha == 0.0);
  CHECK((res.x_next - x).norm() == 0.0);
}

TEST_CASE("line search aborts on a non-finite probe") {
  const auto obj = [](const CVector&) { return std::numeric_limits<double>::quiet_NaN(); };
  const auto identity = [](const CVector& x) { return x; };
  CVector x = CVector::Zero(1);
  CVector grad = CVector::Ones(1);
  CHECK_THROWS_AS(armijo_search(obj, x, 0.0, grad, identity, 1.0, 1e-4, 0.5), NumericalError);
}

TEST_CASE("accepted line-search steps never decrease the smoothed objective") {
  int accepted = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = testing::varied_instance(6400 + trial);
    const SmoothingParam tau(50.0);
    const int n = inst.ch.num_tx_antennas();
    const int groups = inst.ch.num_groups();
    const EffectiveChannels z(inst.ch, inst.theta);
    const LinkGains gains = link_gains(inst.ch, z, inst.f);
    const double obj0 = smoothed_from(inst.ch, gains, tau);

    const CVector grad = grad_f_cached(inst.ch, z, gains, tau);
    const double p_t = inst.p_t;
    const auto obj = [&](const CVector& x) {
      return smoothed_from(inst.ch, link_gains(inst.ch, z, BeamformerStack(x, n, groups)), tau);
    };
    const auto project = [p_t](const CVector& x) { return project_power_ball(x, p_t); };
    const auto res =
        armijo_search(obj, inst.f.stacked(), obj0, grad, project, 1.0, 1e-4, 0.5);
    CHECK(res.obj_next >= obj0);
    if (res.alpha > 0.0) ++accepted;
  }
  CHECK(accepted > 90);  // gradient steps should almost always move
}

TEST_CASE("initialization is deterministic, feasible, and matched to a single user") {
  const auto inst = testing::random_instance(65, 4, 9, {2, 2});
  const double p_t = 3.0;
  const auto [f1, t1] = initialize(inst.ch, p_t, 99);
  const auto [f2, t2] = initialize(inst.ch, p_t, 99);
  CHECK((f1.stacked() - f2.stacked()).norm() == 0.0);
  CHECK((t1.entries() - t2.entries()).norm() == 0.0);
  CHECK(f1.norm() == doctest::Approx(std::sqrt(p_t)).epsilon(1e-12));
  CHECK(t1.max_modulus_error() < 1e-12);

  const auto [f3, t3] = initialize(inst.ch, p_t, 100);
  CHECK((f1.stacked() - f3.stacked()).norm() > 0.0);

  // Singleton group: the starting beamformer is the matched filter.
  const auto single = testing::random_instance(66, 4, 5, {1});
  const auto [fs, ts] = initialize(single.ch, p_t, 7);
  const CRowVector z = effective_channel(single.ch, ts, 0, 0);
  const CVector mrt = z.adjoint() * (std::sqrt(p_t) / z.norm());
  CHECK((fs.stacked() - mrt).norm() < 1e-12 * mrt.norm());
}

TEST_CASE("solve from a stationary feasible point stops after one iteration") {
  const auto inst = testing::random_instance(67, 3, 4, {2, 1});
  SolverOptions opts;
  opts.tau = 50.0;
  opts.tol = 1e-5;
  const auto f0 = BeamformerStack::zero(3, 2);  // both gradients vanish here
  const SolveTrace trace = apg_solve(inst.ch, 2.0, opts, f0, inst.theta);
  CHECK(trace.iteration_count == 1);
  CHECK(trace.reason == TerminationReason::converged);
  CHECK(trace.iterations.size() == 2);
  CHECK(trace.iterations[1].smoothed == trace.iterations[0].smoothed);
}

TEST_CASE("single-user no-IRS solve recovers the matched-filter optimum") {
  for (int trial = 0; trial < 5; ++trial) {
    rng::Stream s(6800 + trial, 4);
    const ChannelSet ch(CMatrix(0, 2), {testing::random_row(s, 2, 1.0)}, {CRowVector(0)}, {1});
    const double p_t = 2.0;
    SolverOptions opts;
    opts.tol = 1e-10;
    opts.max_iters = 500;
    // Random feasible start, deliberately away from the matched filter.
    const auto f0 = testing::random_beamformer(s, 2, 1, p_t);
    const SolveTrace trace = apg_solve(ch, p_t, opts, f0, PhaseVector(CVector(0)));
    const double optimum = std::log1p(p_t * ch.direct(0, 0).squaredNorm());
    CHECK(trace.iterations.back().true_sum_rate ==
          doctest::Approx(optimum).epsilon(1e-4));
    CHECK(trace.iteration_count <= 500);
  }
}

TEST_CASE("solver trace is monotone, feasible, and sandwiched at a multicast instance") {
  const auto inst = testing::random_instance(69, 4, 16, {2, 3});
  SolverOptions opts;
  opts.tau = 50.0;
  opts.tol = 1e-6;
  opts.max_iters = 400;
  const double p_t = 10.0;
  const SolveTrace trace = apg_solve(inst.ch, p_t, opts);

  double bound = 0.0;
  for (int kg : inst.ch.group_sizes()) bound += std::log(static_cast<double>(kg)) / opts.tau;
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    const auto& rec = trace.iterations[i];
    if (i > 0) CHECK(rec.smoothed >= trace.iterations[i - 1].smoothed);
    CHECK(rec.f_norm <= std::sqrt(p_t) + 1e-12);
    CHECK(rec.theta_modulus_error <= 1e-12);
    CHECK(rec.true_sum_rate >= rec.smoothed - 1e-12);
    CHECK(rec.true_sum_rate <= rec.smoothed + bound + 1e-12);
  }
  CHECK(trace.beamformer.within_power(p_t));
  CHECK(trace.phases.unit_modulus());
}

TEST_CASE("iteration budget is honored and reported") {
  const auto inst = testing::random_instance(70, 3, 8, {2, 2});
  SolverOptions opts;
  opts.tol = 1e-14;
  opts.max_iters = 3;
  const SolveTrace trace = apg_solve(inst.ch, 5.0, opts);
  CHECK(trace.iteration_count == 3);
  CHECK(trace.reason == TerminationReason::max_iterations);
  CHECK(trace.iterations.size() == 4);
}

TEST_CASE("solver options are validated") {
  SolverOptions opts;
  opts.tau = -1.0;
  CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
  opts = SolverOptions{};
  opts.shrink = 1.0;
  CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
  opts = SolverOptions{};
  opts.tol = 0.0;
  CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
}
