#include <catch2/catch_amalgamated.hpp>

#include "besdp/qsim.hpp"
#include "support/statevector.hpp"
#include "support/test_util.hpp"

using namespace besdp;
using testutil::inst_a;
using testutil::random_density;
using testutil::random_hermitian;

TEST_CASE("cauchy sampler transform and median") {
  RngStream probe = RngStream::from_seed(9);
  const double u = probe.next_double();
  RngStream s = RngStream::from_seed(9);
  const double tau = 2.5;
  CHECK(sample_cauchy(tau, s) == tau * std::tan(std::numbers::pi * (u - 0.5)));
  CHECK_THROWS_AS(sample_cauchy(0.0, s), std::domain_error);

  RngStream s2 = RngStream::from_seed(10);
  std::vector<double> draws(100000);
  for (auto& d : draws) d = sample_cauchy(1.0, s2);
  std::nth_element(draws.begin(), draws.begin() + draws.size() / 2, draws.end());
  CHECK(std::abs(draws[draws.size() / 2]) <= 0.02);
}

TEST_CASE("cauchy characteristic function identity") {
  // mean of cos(t lambda) over t ~ Cauchy(tau) equals e^{-tau lambda}.
  for (const auto& [tau, lambda] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 2.0}}) {
    RngStream s = RngStream::from_seed(static_cast<std::uint64_t>(100 * tau + lambda));
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = std::cos(sample_cauchy(tau, s) * lambda);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sumsq / n - mean * mean) / n);
    CHECK(std::abs(mean - std::exp(-tau * lambda)) <= 3.0 * se);
  }
}

TEST_CASE("truncated cauchy bias bound") {
  const double tau = 1.5, lambda = 0.8, t_max = 40.0;
  RngStream s = RngStream::from_seed(13);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double t;
    RngStream shot = s.child(static_cast<std::uint64_t>(i));
    do {
      t = sample_cauchy(tau, shot);
    } while (std::abs(t) > t_max);
    const double v = std::cos(t * lambda);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::abs(mean - std::exp(-tau * lambda)) <=
        2.0 * tau / (std::numbers::pi * t_max) + 3.0 * se);
}

TEST_CASE("hadamard expectation closed form") {
  RngStream s = RngStream::from_seed(17);
  const HermitianMatrix rho = random_density(3, s);
  const HermitianMatrix K = random_hermitian(3, s);
  CHECK(hadamard_expectation(rho, K, 0.0) == Catch::Approx(1.0).margin(1e-12));

  RealVector kd(2);
  kd << 0.7, 1.9;
  RealVector e00(2);
  e00 << 1.0, 0.0;
  CHECK(hadamard_expectation(HermitianMatrix::diagonal(e00), HermitianMatrix::diagonal(kd),
                             1.3) == Catch::Approx(std::cos(1.3 * 0.7)).epsilon(1e-12));

  // Not a density matrix.
  CHECK_THROWS_AS(hadamard_expectation(HermitianMatrix::identity(2), K, 0.5),
                  std::domain_error);
}

TEST_CASE("bernoulli shots concentrate on the closed form") {
  RngStream s = RngStream::from_seed(19);
  const HermitianMatrix rho = random_density(2, s);
  const HermitianMatrix K = random_hermitian(2, s);
  const double t = 0.9;
  const double z_exp = hadamard_expectation(rho, K, t);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = 0.5 * (1.0 + z_exp);
    sum += s.next_double() < p ? 1.0 : -1.0;
  }
  CHECK(std::abs(sum / n - z_exp) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("swap hadamard expectation closed form") {
  RngStream s = RngStream::from_seed(23);
  const HermitianMatrix rho = random_density(2, s);
  const HermitianMatrix K = random_hermitian(2, s);

  // t1 = t2 = 0 reduces to Re Tr[rho sigma].
  const HermitianMatrix mixed(0.5 * Matrix::Identity(2, 2));
  CHECK(swap_hadamard_expectation(mixed, mixed, K, 0.0, 0.0) ==
        Catch::Approx(0.5).margin(1e-12));

  // Orthogonal diagonal projectors give zero overlap.
  RealVector e0(2), e1(2), kd(2);
  e0 << 1.0, 0.0;
  e1 << 0.0, 1.0;
  kd << 0.4, 1.1;
  CHECK(swap_hadamard_expectation(HermitianMatrix::diagonal(e0),
                                  HermitianMatrix::diagonal(e1),
                                  HermitianMatrix::diagonal(kd), 0.7, -0.3) ==
        Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("statevector oracle matches the bernoulli simulators") {
  RngStream s = RngStream::from_seed(29);
  for (int rep = 0; rep < 10; ++rep) {
    const HermitianMatrix rho = random_density(2, s);
    const HermitianMatrix sigma = random_density(2, s);
    const HermitianMatrix K = random_hermitian(2, s);
    const double t1 = 2.0 * s.next_double() - 1.0;
    const double t2 = 2.0 * s.next_double() - 1.0;
    CHECK(hadamard_expectation(rho, K, t1) ==
          Catch::Approx(testutil::hadamard_test_statevector(rho, K, t1)).margin(1e-10));
    CHECK(swap_hadamard_expectation(rho, sigma, K, t1, t2) ==
          Catch::Approx(testutil::swap_test_statevector(rho, sigma, K, t1, t2))
              .margin(1e-10));
  }
}

TEST_CASE("budget planning") {
  // Worked example: T=1, lambda=0.5, eps=0.3, alpha=1 gives M=6.
  const EstimatorBudget b = plan_budget(0.5, 1.0, 0.3, 1.0, EstimatorKind::Gradient);
  CHECK(b.M == 6);
  CHECK(b.series_budget == Catch::Approx(0.1));

  // N(m) independent of m and equal to ceil(9 M^2 alpha^2 / eps^2).
  const auto n_expected =
      static_cast<std::int64_t>(std::ceil(9.0 * 36.0 * 1.0 / (0.3 * 0.3)));
  for (const auto n : b.shots) CHECK(n == n_expected);

  // t_max strictly increasing in m.
  for (std::size_t m = 1; m < b.t_max.size(); ++m) CHECK(b.t_max[m] > b.t_max[m - 1]);

  CHECK_THROWS_AS(plan_budget(1e-9, 1.0, 1e-6, 1.0, EstimatorKind::Gradient), BudgetError);
  CHECK_THROWS_AS(plan_budget(-1.0, 1.0, 0.3, 1.0, EstimatorKind::Gradient),
                  std::domain_error);
}

TEST_CASE("thermal trace estimator: exact mode and scalar series") {
  // d=1: the truncated series is the scalar geometric sum.
  RealVector lam(1);
  lam << 0.8;
  const HermitianMatrix K = HermitianMatrix::diagonal(lam);
  RealVector one(1);
  one << 1.0;
  const StateModel model = decompose_state_model(HermitianMatrix::diagonal(one));
  const double T = 1.0;
  const EstimatorBudget budget = plan_budget(0.8, T, 0.2, model.one_norm,
                                             EstimatorKind::Gradient);
  const Estimate exact = estimate_thermal_trace(K, T, model, budget,
                                                RngStream::from_seed(0),
                                                EstimatorMode::Exact);
  double series = 0.0;
  for (int m = 1; m <= budget.M; ++m) series += std::exp(-m * 0.8 / T);
  CHECK(exact.value == Catch::Approx(series).epsilon(1e-14));
  CHECK(exact.stderr_ == 0.0);

  // Exact mode is within the series budget of the closed-form value.
  const double closed = 1.0 / std::expm1(0.8);
  CHECK(std::abs(exact.value - closed) <= budget.series_budget);
}

TEST_CASE("thermal trace estimator: stochastic concentration") {
  const SdpInstance inst = inst_a();
  const HermitianMatrix K = inst.objective;  // mu = 0
  const double T = 1.0;
  const StateModel model = decompose_state_model(inst.constraints[0]);
  const double exact = 1.0 / std::expm1(1.0) + 1.0 / std::expm1(2.0);
  const EstimatorBudget budget =
      plan_budget(1.0, T, 0.1, model.one_norm, EstimatorKind::Gradient);

  int within = 0;
  for (int seed = 0; seed < 10; ++seed) {
    const Estimate est = estimate_thermal_trace(
        K, T, model, budget, RngStream::from_seed(static_cast<std::uint64_t>(seed)));
    if (std::abs(est.value - exact) <= 3.0 * est.stderr_) ++within;
  }
  CHECK(within >= 9);

  // Determinism: identical (budget, seed) gives the identical estimate.
  const Estimate a = estimate_thermal_trace(K, T, model, budget, RngStream::from_seed(7));
  const Estimate b = estimate_thermal_trace(K, T, model, budget, RngStream::from_seed(7));
  CHECK(a.value == b.value);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("unbiasedness of a single series term") {
  // M=1 budget with a huge time cutoff isolates the m=1 term: the weighted
  // estimator mean matches Tr[Q e^{-K/T}] within 4 standard errors.
  RngStream s = RngStream::from_seed(31);
  const Eigen::Index d = 3;
  const HermitianMatrix K(testutil::random_psd(d, s).mat() + 0.4 * Matrix::Identity(d, d));
  const HermitianMatrix Q = random_hermitian(d, s);
  const StateModel model = decompose_state_model(Q);
  const double T = 1.0;

  EstimatorBudget budget;
  budget.kind = EstimatorKind::Gradient;
  budget.M = 1;
  budget.t_max = {1e9};
  budget.shots = {100000};
  budget.epsilon = 0.1;

  const Estimate est = estimate_thermal_trace(K, T, model, budget, RngStream::from_seed(3));
  const HermitianMatrix weight =
      spectral_apply(K, [&](double lam) { return std::exp(-lam / T); });
  const double expected = trace_product(Q, weight);
  CHECK(std::abs(est.value - expected) <= 4.0 * est.stderr_);
}

TEST_CASE("variance scaling with shot count") {
  const SdpInstance inst = inst_a();
  const StateModel model = decompose_state_model(inst.constraints[0]);
  EstimatorBudget budget =
      plan_budget(1.0, 1.0, 0.2, model.one_norm, EstimatorKind::Gradient);
  const Estimate base =
      estimate_thermal_trace(inst.objective, 1.0, model, budget, RngStream::from_seed(5));
  EstimatorBudget big = budget;
  for (auto& n : big.shots) n *= 4;
  const Estimate refined =
      estimate_thermal_trace(inst.objective, 1.0, model, big, RngStream::from_seed(6));
  const double ratio = refined.stderr_ / base.stderr_;
  CHECK(ratio >= 0.4);
  CHECK(ratio <= 0.6);
}

TEST_CASE("hessian element estimator") {
  // Scalar case: lambda = 1, T = 1, Q_i = Q_j = (1): entry is -x(x+1).
  RealVector one(1);
  one << 1.0;
  const HermitianMatrix K = HermitianMatrix::diagonal(one);
  const StateModel model = decompose_state_model(HermitianMatrix::diagonal(one));
  const double T = 1.0;
  const double x = 1.0 / std::expm1(1.0);
  const double exact_entry = -x * (x + 1.0);

  const EstimatorBudget budget =
      plan_budget(1.0, T, 0.25, model.one_norm, EstimatorKind::Hessian, model.one_norm);
  const Estimate est =
      estimate_hessian_element(K, T, model, model, budget, RngStream::from_seed(11));
  CHECK(std::abs(est.value - exact_entry) <= 3.0 * est.stderr_ + budget.series_budget);

  // Exact mode reproduces the truncated double series, which is within the
  // series budget of the closed-form kernel value.
  const Estimate exact =
      estimate_hessian_element(K, T, model, model, budget, RngStream::from_seed(0),
                               EstimatorMode::Exact);
  CHECK(std::abs(exact.value - exact_entry) <= budget.series_budget);
  CHECK(exact.stderr_ == 0.0);
}

TEST_CASE("hessian estimator diagonal sign") {
  // Mean over seeds of the (i,i) estimate stays non-positive within noise.
  RealVector lam(2);
  lam << 0.9, 1.7;
  const HermitianMatrix K = HermitianMatrix::diagonal(lam);
  RealVector qd(2);
  qd << 1.0, -0.5;
  const StateModel model = decompose_state_model(HermitianMatrix::diagonal(qd));
  const EstimatorBudget budget =
      plan_budget(0.9, 1.0, 0.4, model.one_norm, EstimatorKind::Hessian, model.one_norm);
  double mean = 0.0, se2 = 0.0;
  const int seeds = 30;
  for (int seed = 0; seed < seeds; ++seed) {
    const Estimate est = estimate_hessian_element(
        K, 1.0, model, model, budget, RngStream::from_seed(static_cast<std::uint64_t>(seed)));
    mean += est.value / seeds;
    se2 += est.stderr_ * est.stderr_ / (seeds * seeds);
  }
  CHECK(mean <= 3.0 * std::sqrt(se2) + budget.series_budget);
}

TEST_CASE("runtime model scalings") {
  const EstimatorBudget b1 = plan_budget(0.5, 1.0, 0.3, 1.0, EstimatorKind::Gradient);
  const RuntimePrediction r1 = runtime_model(b1, 2.0, 0.5, 1.0, 1.0);

  // Concrete count recomputed by hand.
  double hand = 0.0;
  for (int m = 1; m <= b1.M; ++m) {
    hand += static_cast<double>(b1.shots[static_cast<std::size_t>(m - 1)]) *
            std::ceil(2.0 * b1.t_max[static_cast<std::size_t>(m - 1)]);
  }
  CHECK(r1.concrete_gates == hand);

  // Halving eps multiplies the asymptotic prediction by exactly 8.
  const double a1 = runtime_asymptotic_gradient(0.5, 1.0, 0.3, 1.0, 2.0);
  const double a2 = runtime_asymptotic_gradient(0.5, 1.0, 0.15, 1.0, 2.0);
  CHECK(a2 / a1 == 8.0);

  // Hessian/gradient asymptotic ratio is (T/lambda)^4 at equal norms.
  const double g = runtime_asymptotic_gradient(0.5, 1.0, 0.3, 1.0, 1.0);
  const double h = runtime_asymptotic_hessian(0.5, 1.0, 0.3, 1.0, 1.0, 1.0);
  CHECK(h / g == Catch::Approx(std::pow(1.0 / 0.5, 4)).epsilon(1e-12));

  // End-to-end expression sanity: monotone in 1/delta.
  const double e1 = runtime_end_to_end(2, 1.0, 10.0, 0.1, 0.5, 1.0, 1.0, 2.0);
  const double e2 = runtime_end_to_end(2, 1.0, 10.0, 0.05, 0.5, 1.0, 1.0, 2.0);
  CHECK(e2 > e1);
}
