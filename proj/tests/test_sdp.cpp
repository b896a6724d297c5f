#include <catch2/catch_amalgamated.hpp>

#include "besdp/sdp.hpp"
#include "support/test_util.hpp"

using namespace besdp;
using testutil::inst_a;
using testutil::inst_b;
using testutil::random_hermitian;
using testutil::random_slater_instance;

TEST_CASE("dual_slack arithmetic") {
  const SdpInstance inst = inst_a();
  DualPoint zero = DualPoint::Zero(1);
  CHECK((dual_slack(inst, zero).mat() - inst.objective.mat()).norm() == 0.0);

  DualPoint one(1);
  one << 1.0;
  const auto K = dual_slack(inst, one);
  CHECK(K.mat()(0, 0).real() == Catch::Approx(0.0).margin(1e-15));
  CHECK(K.mat()(1, 1).real() == Catch::Approx(1.0));

  // c=2 entrywise oracle.
  RngStream s = RngStream::from_seed(7);
  const SdpInstance rnd = random_slater_instance(4, 2, s);
  DualPoint mu(2);
  mu << 0.3, -0.2;
  const Matrix expected = rnd.objective.mat() - 0.3 * rnd.constraints[0].mat() +
                          0.2 * rnd.constraints[1].mat();
  CHECK((dual_slack(rnd, mu).mat() - expected).norm() < 1e-14);

  DualPoint wrong(3);
  wrong.setZero();
  CHECK_THROWS_AS(dual_slack(rnd, wrong), std::invalid_argument);
}

TEST_CASE("slackness residuals") {
  RealVector k(2), x(2);
  k << 0.0, 1.0;
  x << 5.0, 0.0;
  const auto orthogonal = slackness_residuals(HermitianMatrix::diagonal(k),
                                              HermitianMatrix::diagonal(x));
  CHECK(orthogonal.trace_residual == Catch::Approx(0.0).margin(1e-14));
  CHECK(orthogonal.product_norm == Catch::Approx(0.0).margin(1e-14));

  const auto ident = slackness_residuals(HermitianMatrix::identity(2),
                                         HermitianMatrix::identity(2));
  CHECK(ident.trace_residual == Catch::Approx(2.0));
  CHECK(ident.product_norm == Catch::Approx(std::sqrt(2.0)));

  // Oracle pair of the diag(1,2)/identity instance: K=diag(0,1), X*=diag(1,0).
  RealVector xstar(2);
  xstar << 1.0, 0.0;
  const auto opt = slackness_residuals(HermitianMatrix::diagonal(k),
                                       HermitianMatrix::diagonal(xstar));
  CHECK(opt.trace_residual == Catch::Approx(0.0).margin(1e-14));
  CHECK(opt.product_norm == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("state model decomposition") {
  RngStream s = RngStream::from_seed(3);
  const HermitianMatrix psd = testutil::random_psd(3, s);
  const StateModel single = decompose_state_model(psd);
  REQUIRE(single.terms.size() == 1);
  CHECK(single.terms[0].weight == Catch::Approx(psd.mat().trace().real()));
  CHECK(single.terms[0].state.mat().trace().real() == Catch::Approx(1.0));

  RealVector pm(2);
  pm << 1.0, -1.0;
  const StateModel split = decompose_state_model(HermitianMatrix::diagonal(pm));
  REQUIRE(split.terms.size() == 2);
  CHECK(split.one_norm == Catch::Approx(2.0));
  CHECK(split.terms[0].weight == Catch::Approx(1.0));
  CHECK(split.terms[1].weight == Catch::Approx(-1.0));

  const HermitianMatrix A = random_hermitian(5, s);
  const StateModel m = decompose_state_model(A);
  CHECK((m.reconstruct() - A.mat()).norm() < 1e-9);
  for (const auto& term : m.terms) {
    CHECK(is_psd_within_clip(term.state));
    CHECK(term.state.mat().trace().real() == Catch::Approx(1.0).margin(1e-10));
  }

  // Round-trip keeps the 1-norm.
  const StateModel again = decompose_state_model(HermitianMatrix(m.reconstruct()));
  CHECK(again.one_norm == Catch::Approx(m.one_norm).margin(1e-9));

  CHECK_THROWS_AS(decompose_state_model(HermitianMatrix::zero(2)), std::invalid_argument);
}

TEST_CASE("spectral summary") {
  RealVector a(3);
  a << 1.0, 1.0, 3.0;
  const auto s1 = spectral_summary(HermitianMatrix::diagonal(a), 1e-8);
  CHECK(s1.lambda_min == Catch::Approx(1.0));
  CHECK(s1.degeneracy == 2);
  CHECK(s1.gap == Catch::Approx(2.0));
  CHECK(s1.has_excited);

  RealVector b(3);
  b << 0.5, 1.5, 1.5 + 1e-12;
  const auto s2 = spectral_summary(HermitianMatrix::diagonal(b), 1e-9);
  CHECK(s2.lambda_min == Catch::Approx(0.5));
  CHECK(s2.degeneracy == 1);
  CHECK(s2.gap == Catch::Approx(1.0).epsilon(1e-9));

  RealVector c(1);
  c << 2.0;
  const auto s3 = spectral_summary(HermitianMatrix::diagonal(c));
  CHECK(s3.lambda_min == Catch::Approx(2.0));
  CHECK(s3.degeneracy == 1);
  CHECK(s3.gap == 0.0);
  CHECK_FALSE(s3.has_excited);

  RealVector bad(2);
  bad << -0.1, 1.0;
  CHECK_THROWS_AS(spectral_summary(HermitianMatrix::diagonal(bad)), DualInfeasibleError);
}

TEST_CASE("find_strictly_feasible") {
  // H > 0: the origin works.
  CHECK(find_strictly_feasible(inst_a()).isZero());

  // Indefinite H with a workable constraint direction.
  RealVector h(2), q1(2), q(1);
  h << -1.0, 2.0;
  q1 << -1.0, 1.0;
  q << 1.0;
  const SdpInstance shifted(HermitianMatrix::diagonal(h),
                            {HermitianMatrix::diagonal(q1)}, q);
  const DualPoint mu = find_strictly_feasible(shifted);
  CHECK(min_eigenvalue(dual_slack(shifted, mu)) > 0.0);

  // Empty dual interior: K = diag(-mu, mu) is never positive definite.
  RealVector zero2(2), qpm(2);
  zero2.setZero();
  qpm << 1.0, -1.0;
  const SdpInstance empty(HermitianMatrix::diagonal(zero2),
                          {HermitianMatrix::diagonal(qpm)}, q);
  CHECK_THROWS_AS(find_strictly_feasible(empty), DualInfeasibleError);
}

TEST_CASE("oracle_solve bisection and barrier") {
  const auto a = oracle_solve(inst_a(), 1e-10);
  CHECK(a.value == Catch::Approx(1.0).margin(1e-9));
  CHECK(a.mu(0) == Catch::Approx(1.0).margin(1e-9));

  // Symmetric instance H=I, Q=I, q=1 at d=2.
  RealVector q(1);
  q << 1.0;
  const SdpInstance sym(HermitianMatrix::identity(2), {HermitianMatrix::identity(2)}, q);
  const auto s = oracle_solve(sym, 1e-10);
  CHECK(s.value == Catch::Approx(1.0).margin(1e-9));

  const auto b = oracle_solve(inst_b(), 1e-10);
  CHECK(b.value == Catch::Approx(1.0).margin(1e-9));

  // Barrier path on a random c=2 instance agrees with the bisection view of
  // each axis only at optimum; here we check weak duality against the
  // Slater witness used to build the instance instead.
  RngStream st = RngStream::from_seed(23);
  const SdpInstance rnd = random_slater_instance(4, 2, st);
  const auto sol = oracle_solve(rnd, 1e-7);
  // mu* is strictly feasible and E >= mu*.q - tol.
  CHECK(min_eigenvalue(dual_slack(rnd, sol.mu)) > 0.0);
  CHECK(sol.value >= sol.mu.dot(rnd.targets) - 1e-7);
}

TEST_CASE("oracle weak duality on the diag instance") {
  // Any hand-supplied feasible X gives Tr[HX] >= E - tol.
  const SdpInstance inst = inst_a();
  const auto sol = oracle_solve(inst, 1e-10);
  RngStream s = RngStream::from_seed(77);
  for (int rep = 0; rep < 20; ++rep) {
    // Feasible X: diag(t, 1-t) mixed with off-diagonal Hermitian noise kept PSD.
    const double t = 0.99 * s.next_double();
    Matrix x = Matrix::Zero(2, 2);
    x(0, 0) = t;
    x(1, 1) = 1.0 - t;
    const double offcap = std::sqrt(t * (1.0 - t));
    const double re = (2.0 * s.next_double() - 1.0) * offcap;
    x(0, 1) = re;
    x(1, 0) = re;
    const HermitianMatrix X(x);
    REQUIRE(is_psd_within_clip(X));
    CHECK(trace_product(inst.objective, X) >= sol.value - 1e-9);
  }
}

TEST_CASE("unbounded trace minimization witness") {
  // K with a negative eigenvalue: Tr[K c vv'] = -c lambda decreases without bound.
  RealVector k(2);
  k << -0.7, 2.0;
  const HermitianMatrix K = HermitianMatrix::diagonal(k);
  const auto es = eigendecompose(K);
  const Matrix v = es.eigenvectors.col(0);
  for (const double c : {1.0, 10.0, 100.0}) {
    const Matrix X = c * v * v.adjoint();
    CHECK((K.mat() * X).trace().real() == Catch::Approx(-c * 0.7).margin(1e-12));
  }
}

TEST_CASE("oracle detects unbounded dual") {
  // H=I, Q = -I, q = (1): K = I + mu, feasible for all mu >= -1, q > 0 so
  // sup mu q = +inf.
  RealVector q(1);
  q << 1.0;
  const SdpInstance unb(HermitianMatrix::identity(2),
                        {HermitianMatrix(Matrix(-Matrix::Identity(2, 2)))}, q);
  CHECK_THROWS_AS(oracle_solve(unb, 1e-8), DualUnboundedError);
}
