#include <doctest.h>

#include <limits>

#include "test_support.hpp"
#include "wcgpr/augmented.hpp"
#include "wcgpr/errors.hpp"

using namespace wcgpr;
using namespace wcgpr::testing;

namespace {
constexpr cdouble J{0.0, 1.0};

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Eigen::VectorXcd cvec(std::initializer_list<cdouble> v) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (cdouble x : v) out(i++) = x;
  return out;
}

Eigen::MatrixXcd cmat(Eigen::Index r, Eigen::Index c, std::initializer_list<cdouble> v) {
  Eigen::MatrixXcd m(r, c);
  auto it = v.begin();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = *it++;
  return m;
}
}  // namespace

TEST_CASE("to_augmented examples") {
  CHECK(to_augmented(CompositeVector(vec({1, 0}))).materialize() == cvec({1.0, 1.0}));
  CHECK(to_augmented(CompositeVector(vec({0, 1}))).materialize() == cvec({J, -J}));
  CHECK(to_augmented(CompositeVector(vec({3, 4}))).materialize() == cvec({{3, 4}, {3, -4}}));
  CHECK_THROWS_AS(CompositeVector(vec({1, 2, 3})), StructuralError);
}

TEST_CASE("to_composite examples and structure check") {
  CHECK(to_composite(cvec({1.0, 1.0})).data() == vec({1, 0}));
  CHECK(to_composite(cvec({J, -J})).data() == vec({0, 1}));
  CHECK_THROWS_AS(to_composite(cvec({J, J})), StructuralError);
  CHECK_THROWS_AS(to_composite(cvec({1.0, 2.0, 3.0})), StructuralError);
}

TEST_CASE("round trip on random composite vectors") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 12;
    const double scale = std::pow(10.0, uniform(rng, -3.0, 6.0));
    Eigen::VectorXd v = scale * Eigen::VectorXd::Random(2 * n);
    const CompositeVector c(v);
    CHECK((to_composite(to_augmented(c)).data() - v).cwiseAbs().maxCoeff() < 1e-14 * std::max(1.0, scale));
    // Through the stacked form and the literal (1/2) T^H z.
    CHECK((to_composite(to_augmented(c).materialize()).data() - v).cwiseAbs().maxCoeff() <
          1e-14 * std::max(1.0, scale));
  }
  Eigen::VectorXd ten = Eigen::VectorXd::Random(10);
  CHECK((to_composite(to_augmented(CompositeVector(ten))).data() - ten).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("transform identity is exact") {
  for (Eigen::Index n : {1, 2, 5, 12}) {
    const Eigen::MatrixXcd t = transform_matrix(n);
    const Eigen::MatrixXcd two = 2.0 * Eigen::MatrixXcd::Identity(2 * n, 2 * n);
    CHECK((t * t.adjoint() - two).cwiseAbs().maxCoeff() == 0.0);
    CHECK((t.adjoint() * t - two).cwiseAbs().maxCoeff() == 0.0);
    // T v equals to_augmented on a basis vector.
    Eigen::VectorXd e = Eigen::VectorXd::Zero(2 * n);
    e(n) = 1.0;
    CHECK((t * e.cast<cdouble>() - to_augmented(CompositeVector(e)).materialize()).norm() == 0.0);
  }
}

TEST_CASE("augmented_from_blocks") {
  CHECK(augmented_from_blocks(Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Zero(2, 2)).materialize() ==
        Eigen::MatrixXcd::Identity(4, 4));
  CHECK(augmented_from_blocks(cmat(1, 1, {2.0}), cmat(1, 1, {J})).materialize() ==
        cmat(2, 2, {2.0, J, -J, 2.0}));
  CHECK_THROWS_AS(augmented_from_blocks(Eigen::MatrixXcd::Zero(2, 2), Eigen::MatrixXcd::Zero(2, 3)),
                  StructuralError);

  Rng rng(3);
  const Eigen::MatrixXcd g = random_complex(rng, 4, 4);
  const auto report = validate_augmented_covariance(augmented_from_blocks(g * g.adjoint(), Eigen::MatrixXcd::Zero(4, 4)));
  CHECK(report.passed);
}

TEST_CASE("composite_matrix examples against dense multiplication") {
  const AugmentedMatrix scaled(2.0 * Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Zero(2, 2));
  CHECK(composite_matrix(scaled) == Eigen::MatrixXd::Identity(4, 4));

  const AugmentedMatrix a(cmat(1, 1, {2.0}), cmat(1, 1, {0.5}));
  Eigen::MatrixXd expected_a(2, 2);
  expected_a << 1.25, 0.0, 0.0, 0.75;
  CHECK(rel_error(dense_composite(a.materialize()), expected_a) < 1e-15);
  CHECK(rel_error(composite_matrix(a), expected_a) < 1e-15);

  const AugmentedMatrix b(cmat(1, 1, {1.0}), cmat(1, 1, {J}));
  Eigen::MatrixXd expected_b = Eigen::MatrixXd::Constant(2, 2, 0.5);
  CHECK(rel_error(dense_composite(b.materialize()), expected_b) < 1e-15);
  CHECK(rel_error(composite_matrix(b), expected_b) < 1e-15);

  // Non-Hermitian upper-left block has no real symmetric composite form.
  CHECK_THROWS_AS(composite_matrix(AugmentedMatrix(cmat(1, 1, {J}), cmat(1, 1, {0.0}))), StructuralError);
  CHECK_THROWS_AS(composite_matrix(AugmentedMatrix(cmat(2, 2, {1.0, 0.5, 0.0, 1.0}), Eigen::MatrixXcd::Zero(2, 2))),
                  StructuralError);
}

TEST_CASE("composite and augmented forms agree with the dense transform") {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 1 + trial % 7;
    const Eigen::Index m = 1 + (trial * 3) % 5;
    const AugmentedMatrix rect(random_complex(rng, n, m), random_complex(rng, n, m));
    // Cross blocks carry no Hermitian structure, so the structure check is off.
    const CompositeBlocks blocks = composite_blocks(rect, std::numeric_limits<double>::infinity());
    CHECK(rel_error(blocks.assemble(), dense_composite(rect.materialize())) < 1e-14);
    CHECK(rel_error(augmented_from_composite(blocks).materialize(), rect.materialize()) < 1e-14);
  }
}

TEST_CASE("property: composite PSD iff augmented PSD") {
  Rng rng(23);
  int psd = 0, indefinite = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 1 + trial % 12;
    auto cov = random_augmented_cov(rng, n, 1 + trial % (2 * n + 1));
    Eigen::MatrixXcd a = cov.cov;
    if (trial % 2 == 1) a.diagonal().array() -= uniform(rng, 0.0, 2.0) * a.diagonal().real().mean();
    const AugmentedMatrix m(a, cov.pseudo);
    const auto [aug_min, aug_max] = eig_range(m.materialize());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(composite_matrix(m), Eigen::EigenvaluesOnly);
    const double comp_min = eig.eigenvalues().minCoeff();
    const double comp_max = eig.eigenvalues().maxCoeff();
    const bool aug_psd = aug_min >= -1e-10 * aug_max;
    const bool comp_psd = comp_min >= -1e-10 * comp_max;
    CHECK(aug_psd == comp_psd);
    // T / sqrt(2) is unitary, so the spectra differ by exactly a factor 2.
    CHECK(std::abs(aug_min - 2.0 * comp_min) < 1e-10 * std::max(std::abs(aug_min), std::abs(aug_max)));
    (aug_psd ? psd : indefinite)++;
  }
  CHECK(psd > 50);
  CHECK(indefinite > 50);
}

TEST_CASE("solve_augmented examples") {
  const AugmentedMatrix scaled(2.0 * Eigen::MatrixXcd::Identity(2, 2), Eigen::MatrixXcd::Zero(2, 2));
  const AugmentedVector rhs(cvec({4.0, 4.0 * J}));
  CHECK(solve_augmented(scaled, rhs).materialize() == cvec({2.0, 2.0 * J, 2.0, -2.0 * J}));

  const AugmentedMatrix m(cmat(1, 1, {2.0}), cmat(1, 1, {0.5}));
  const Eigen::VectorXcd x = solve_augmented(m, AugmentedVector(cvec({1.0}))).materialize();
  const Eigen::VectorXcd dense = m.materialize().inverse() * cvec({1.0, 1.0});
  CHECK((x - dense).cwiseAbs().maxCoeff() < 1e-12);

  // Rank-deficient: A = B = [[1]] has eigenvalues {2, 0}.
  const AugmentedMatrix singular(cmat(1, 1, {1.0}), cmat(1, 1, {1.0}));
  CHECK_THROWS_AS(solve_augmented(singular, AugmentedVector(cvec({1.0})), JitterPolicy::disabled()),
                  SingularMatrixError);
  CHECK_NOTHROW(solve_augmented(singular, AugmentedVector(cvec({1.0}))));
}

TEST_CASE("jitter escalates and finally gives up") {
  // Negative definite matrix: no jitter in the ladder can rescue it.
  const AugmentedMatrix negative(cmat(1, 1, {-1.0}), cmat(1, 1, {0.0}));
  CHECK_THROWS_AS(AugmentedFactorization{negative}, SingularMatrixError);

  const AugmentedMatrix singular(cmat(1, 1, {1.0}), cmat(1, 1, {1.0}));
  const AugmentedFactorization f(singular);
  CHECK(f.jitter() == doctest::Approx(1e-12 * 1.0));
}

TEST_CASE("property: solve residual on well-conditioned random instances") {
  Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + trial % 12;
    auto cov = random_augmented_cov(rng, n, 2 * n + 3);
    const AugmentedMatrix m(cov.cov, cov.pseudo);
    const auto [lo, hi] = eig_range(m.materialize());
    if (hi / lo > 1e6) continue;
    const AugmentedVector rhs(random_complex(rng, n, 1).col(0));
    const AugmentedVector x = solve_augmented(m, rhs);
    const Eigen::VectorXcd residual = (m * x).materialize() - rhs.materialize();
    CHECK(residual.norm() / rhs.materialize().norm() < 1e-10);

    // Matrix right-hand side against the dense inverse.
    const AugmentedMatrix r(random_complex(rng, n, 3), random_complex(rng, n, 3));
    const AugmentedMatrix xs = AugmentedFactorization(m).solve(r);
    CHECK(rel_error(xs.materialize(), Eigen::MatrixXcd(m.materialize().inverse() * r.materialize())) < 1e-9);
  }
}

TEST_CASE("augmented algebra operations match dense arithmetic") {
  Rng rng(31);
  const AugmentedMatrix p(random_complex(rng, 3, 4), random_complex(rng, 3, 4));
  const AugmentedMatrix q(random_complex(rng, 4, 2), random_complex(rng, 4, 2));
  CHECK(rel_error((p * q).materialize(), Eigen::MatrixXcd(p.materialize() * q.materialize())) < 1e-14);
  CHECK(rel_error(p.adjoint().materialize(), Eigen::MatrixXcd(p.materialize().adjoint())) == 0.0);
  const AugmentedVector v(random_complex(rng, 4, 1).col(0));
  CHECK(rel_error((p * v).materialize(), Eigen::VectorXcd(p.materialize() * v.materialize())) < 1e-14);
  CHECK_THROWS_AS(q * p, StructuralError);
}

TEST_CASE("empty augmented matrices") {
  const AugmentedMatrix empty(Eigen::MatrixXcd(0, 0), Eigen::MatrixXcd(0, 0));
  CHECK(empty.materialize().size() == 0);
  CHECK(validate_augmented_covariance(empty).passed);
  const AugmentedFactorization f(empty);
  CHECK(f.solve(AugmentedVector(Eigen::VectorXcd(0))).half_size() == 0);
  CHECK(f.composite_log_det() == 0.0);
}
