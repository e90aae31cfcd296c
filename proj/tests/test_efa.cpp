#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "hirschfa/efa.hpp"
#include "hirschfa/report.hpp"

using namespace hirschfa;
using namespace hirschfa::efa;

namespace {

std::vector<std::string> names(Eigen::Index p) {
  std::vector<std::string> out;
  for (Eigen::Index i = 0; i < p; ++i) out.push_back("v" + std::to_string(i));
  return out;
}

Matrix planted_loadings() {
  Matrix l(6, 2);
  l << 0.9, 0, 0.8, 0, 0.7, 0, 0, 0.85, 0, 0.75, 0, 0.6;
  return l;
}

CorrelationMatrix implied(const Matrix& l) {
  Matrix r = l * l.transpose();
  r.diagonal().setOnes();
  return {r, names(l.rows())};
}

CorrelationMatrix equicorrelation(int p, double rho) {
  Matrix r = Matrix::Constant(p, p, rho);
  r.diagonal().setOnes();
  return {r, names(p)};
}

double varimax_criterion(const Matrix& l) {
  const Matrix h = l.rowwise().norm();
  Matrix n = l;
  for (Eigen::Index i = 0; i < l.rows(); ++i) n.row(i) /= h(i);
  const Matrix sq = n.array().square();
  const double p = static_cast<double>(l.rows());
  double v = 0.0;
  for (Eigen::Index j = 0; j < l.cols(); ++j) {
    v += sq.col(j).array().square().sum() - std::pow(sq.col(j).sum(), 2) / p;
  }
  return v / p;
}

Matrix random_orthogonal(std::mt19937_64& rng, int m) {
  std::normal_distribution<double> z;
  Matrix a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = z(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ();
}

const std::vector<std::string>& core7() { return report::kCoreIndicators; }

}  // namespace

TEST_CASE("uls recovers a planted two-factor structure") {
  const Matrix lambda = planted_loadings();
  const auto ex = uls_extract(implied(lambda));
  const Matrix& l = ex.unrotated.values;
  CHECK((l * l.transpose() - lambda * lambda.transpose()).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK((ex.communalities - lambda.rowwise().squaredNorm()).cwiseAbs().maxCoeff() <= 1e-4);
  CHECK(ex.warnings.empty());

  const auto vm = varimax(ex.unrotated);
  const auto al = align_loadings(vm.rotated, LoadingMatrix{lambda, Rotation::varimax, names(6)});
  CHECK((al.aligned.values - lambda).cwiseAbs().maxCoeff() <= 1e-4);
}

TEST_CASE("uls fixed point: loadings are scaled eigenvectors of the reduced matrix") {
  // simulated data keeps every communality interior
  ExtractionSettings tight;
  tight.tol = 1e-10;
  tight.max_iter = 20000;
  std::mt19937_64 rng(31);
  std::normal_distribution<double> z;
  const Matrix lambda = planted_loadings();
  for (int trial = 0; trial < 5; ++trial) {
    Matrix data(300, 6);
    for (int r = 0; r < 300; ++r) {
      const double f1 = z(rng);
      const double f2 = z(rng);
      for (int i = 0; i < 6; ++i) {
        const double common = lambda(i, 0) * f1 + lambda(i, 1) * f2;
        data(r, i) = common + std::sqrt(1.0 - lambda.row(i).squaredNorm()) * z(rng);
      }
    }
    const auto res = efa_on_data(data, names(6), stats::Transform::identity, tight, {Rotation::none});
    REQUIRE(res.warnings.empty());
    const Matrix& l = res.unrotated.values;
    Matrix reduced = res.correlations.values;
    reduced.diagonal() = l.rowwise().squaredNorm();
    const Matrix lhs = reduced * l;
    const Matrix rhs = l * l.colwise().squaredNorm().asDiagonal();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("varimax preserves communalities and never lowers its criterion") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 5 + trial % 6;
    const int m = 2 + trial % 3;
    Matrix l(p, m);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < m; ++j) l(i, j) = u(rng) / std::sqrt(m);
    const auto vm = varimax(LoadingMatrix{l, Rotation::none, names(p)});
    CHECK((vm.rotated.values.rowwise().squaredNorm() - l.rowwise().squaredNorm()).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((vm.rotation.transpose() * vm.rotation - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((l * vm.rotation - vm.rotated.values).cwiseAbs().maxCoeff() <= 1e-10);
    for (std::size_t k = 1; k < vm.criterion_trace.size(); ++k) {
      CHECK(vm.criterion_trace[k] >= vm.criterion_trace[k - 1] - 1e-12);
    }
    // no orthogonal turn of the solution scores higher
    const double best = varimax_criterion(vm.rotated.values);
    for (int k = 0; k < 5; ++k) {
      CHECK(varimax_criterion(vm.rotated.values * random_orthogonal(rng, m)) <= best + 1e-9);
    }
    // output convention: descending SS, nonnegative column sums
    const Vector ss = vm.rotated.values.colwise().squaredNorm();
    for (int j = 1; j < m; ++j) CHECK(ss(j - 1) >= ss(j) - 1e-12);
    for (int j = 0; j < m; ++j) CHECK(vm.rotated.values.col(j).sum() >= -1e-12);
  }
}

TEST_CASE("promax") {
  const auto res = efa_pipeline(report::fixture(), core7(), stats::Transform::log, {},
                                {Rotation::promax, 3});
  REQUIRE(res.phi);
  REQUIRE(res.structure);
  const Matrix& phi = *res.phi;
  CHECK(phi.diagonal().isOnes(1e-12));
  CHECK((phi - phi.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(phi).eigenvalues().minCoeff() > 0.0);
  CHECK((res.rotated.values * phi - *res.structure).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((res.ss_loadings - res.structure->colwise().squaredNorm().transpose()).cwiseAbs().maxCoeff() <= 1e-10);

  // an already simple orthogonal structure stays uncorrelated
  const auto pm = promax(LoadingMatrix{planted_loadings(), Rotation::varimax, names(6)}, 3);
  CHECK(std::abs(pm.phi(0, 1)) <= 1e-8);
}

TEST_CASE("sampling adequacy") {
  double last = 0.0;
  for (double rho : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    const double k = kmo(equicorrelation(5, rho));
    CHECK(k > last);
    last = k;
  }
  Matrix r(2, 2);
  r << 1, 0.9, 0.9, 1;
  const auto b = bartlett({r, names(2)}, 26);
  CHECK(b.df == 1);
  CHECK(b.chi2 == doctest::Approx(-(25.0 - 1.5) * std::log(0.19)));
  CHECK(b.chi2 == doctest::Approx(39.03).epsilon(1e-3));
  CHECK(b.p < 1e-8);
  CHECK(kaiser_factor_count(equicorrelation(6, 0.6)) == 1);
  CHECK(kaiser_factor_count(implied(planted_loadings())) == 2);
}

TEST_CASE("categorization thresholds nest") {
  const auto res = efa_pipeline(report::fixture(), core7(), stats::Transform::identity, {}, {});
  for (double lo : {0.3, 0.5, 0.6}) {
    const auto a = categorize(res.rotated, lo);
    const auto b = categorize(res.rotated, lo + 0.1);
    for (std::size_t i = 0; i < a.memberships.size(); ++i) {
      for (int f : b.memberships[i]) {
        CHECK(std::find(a.memberships[i].begin(), a.memberships[i].end(), f) != a.memberships[i].end());
      }
    }
    for (int f = 0; f < 2; ++f) CHECK(b.members_of(f).size() <= a.members_of(f).size());
  }
}

TEST_CASE("alignment undoes permutations and sign flips") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + trial % 3;
    Matrix ref(8, m);
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < m; ++j) ref(i, j) = u(rng);
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix scrambled(8, m);
    for (int j = 0; j < m; ++j) scrambled.col(j) = ((trial + j) % 2 ? -1.0 : 1.0) * ref.col(perm[j]);
    const auto al = align_loadings(LoadingMatrix{scrambled, Rotation::varimax, names(8)},
                                   LoadingMatrix{ref, Rotation::varimax, names(8)});
    CHECK((al.aligned.values - ref).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(al.congruence == doctest::Approx(m));
  }
  const Vector a = Vector::LinSpaced(5, 1, 5);
  CHECK(tucker_congruence(a, 2.0 * a) == doctest::Approx(1.0));
  CHECK(tucker_congruence(a, -a) == doctest::Approx(-1.0));
}

TEST_CASE("bootstrap") {
  const auto& table = report::fixture();
  const auto run = [&](std::uint64_t seed) {
    return bootstrap_efa(table, core7(), stats::Transform::log, {}, {}, 40, seed);
  };
  const auto a = run(17);
  const auto b = run(17);
  CHECK(a.summary.mean == b.summary.mean);
  CHECK(a.summary.lower == b.summary.lower);
  CHECK(a.converged + a.non_converged == 40);
  CHECK((a.summary.lower.array() <= a.summary.upper.array()).all());
  CHECK(run(18).summary.mean != a.summary.mean);

  // resampling every row once reproduces the full-sample solution
  const Resampler identity = [](int, std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
  };
  const auto same = bootstrap_efa(table, core7(), stats::Transform::log, {}, {}, 5, 1, identity);
  CHECK((same.summary.mean - same.reference.values).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(same.summary.sd.cwiseAbs().maxCoeff() <= 1e-12);

  // independent of evaluation order: resample b depends only on (seed, b)
  const auto r = seeded_resampler(17);
  CHECK(r(3, 26) == seeded_resampler(17)(3, 26));
  CHECK(r(3, 26) != r(4, 26));

  CHECK_THROWS_AS(bootstrap_efa(table, core7(), stats::Transform::log, {}, {}, 1, 1), ValidationError);
}
