#include "oracles.hpp"
#include "srdf/srdf_core.hpp"

#include <doctest.h>

#include <cmath>

using namespace srdf;

namespace {

Matrix pair(double r) {
  Matrix s(2, 2);
  s << 1, r, r, 1;
  return s;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::vector<SamplingSet> all_sets(int m) {
  std::vector<SamplingSet> out;
  for (int k = 1; k <= m; ++k)
    for (const auto& idx : oracle::subsets(m, k)) out.emplace_back(std::vector<Eigen::Index>(idx.begin(), idx.end()), m);
  return out;
}

}  // namespace

TEST_CASE("weight matrix examples") {
  CHECK(weight_matrix(partition(validate_covariance(Matrix::Identity(2, 2)), SamplingSet({0}, 2))).g(0, 0) == 1.0);
  CHECK(weight_matrix(partition(validate_covariance(pair(0.5)), SamplingSet({0}, 2))).g(0, 0) ==
        doctest::Approx(1.25).epsilon(1e-15));
  std::mt19937_64 rng(3);
  const auto model = validate_covariance(oracle::random_spd(4, rng));
  CHECK(weight_matrix(partition(model, SamplingSet::all(4))).g.isApprox(Matrix::Identity(4, 4)));
}

TEST_CASE("weight matrix eigenvalues are at least one") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const int m = 2 + t % 5;
    const auto model = validate_covariance(oracle::random_spd(m, rng));
    for (const auto& set : all_sets(m)) {
      const auto g = weight_matrix(partition(model, set)).g;
      CHECK((g - g.transpose()).norm() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(g).eigenvalues().minCoeff() >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("MMSE floor and maximum distortion") {
  CHECK(min_distortion(partition(validate_covariance(Matrix::Identity(3, 3)), SamplingSet({0}, 3))) == 2.0);
  CHECK(min_distortion(partition(validate_covariance(pair(0.5)), SamplingSet({0}, 2))) == doctest::Approx(0.75));
  CHECK(min_distortion(partition(validate_covariance(pair(0.5)), SamplingSet::all(2))) == 0.0);
  CHECK(max_distortion(validate_covariance(Matrix::Identity(3, 3))) == 3.0);
  CHECK(max_distortion(validate_covariance(pair(0.5))) == 2.0);
  CHECK(max_distortion(validate_covariance(Vector(vec({2, 3, 4})).asDiagonal().toDenseMatrix())) == 9.0);
}

TEST_CASE("spectrum examples") {
  const auto lam = srdf_eigenvalues(partition(validate_covariance(Matrix::Identity(2, 2)), SamplingSet::all(2)));
  CHECK(lam(0) == doctest::Approx(1.0));
  CHECK(lam(1) == doctest::Approx(1.0));
  CHECK(srdf_eigenvalues(partition(validate_covariance(pair(0.5)), SamplingSet({0}, 2)))(0) ==
        doctest::Approx(1.25).epsilon(1e-15));

  // Single sampled component of the correlation model: sigma_j^2 + sum_{i != j} r_ij^2 sigma_i^2.
  const Vector sig = vec({1.0, 1.5, 0.7});
  Matrix r(3, 3);
  r << 1, 0.3, -0.6, 0.3, 1, 0.2, -0.6, 0.2, 1;
  const auto model = validate_covariance(correlation_covariance(sig, r));
  for (Eigen::Index j = 0; j < 3; ++j) {
    double expected = sig(j) * sig(j);
    for (Eigen::Index i = 0; i < 3; ++i)
      if (i != j) expected += r(i, j) * r(i, j) * sig(i) * sig(i);
    CHECK(srdf_eigenvalues(partition(model, SamplingSet({j}, 3)))(0) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("symmetric and nonsymmetric spectra agree") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + t % 5;
    const auto model = validate_covariance(oracle::random_spd(m, rng));
    for (const auto& set : all_sets(m)) {
      const auto bp = partition(model, set);
      const Matrix product = weight_matrix(bp).g * bp.sigmaA;
      Eigen::EigenSolver<Matrix> general(product);
      std::vector<double> ref;
      for (Eigen::Index i = 0; i < product.rows(); ++i) {
        CHECK(std::abs(general.eigenvalues()(i).imag()) < 1e-9);
        ref.push_back(general.eigenvalues()(i).real());
      }
      std::sort(ref.rbegin(), ref.rend());
      const Vector lam = srdf_eigenvalues(bp);
      for (Eigen::Index i = 0; i < lam.size(); ++i)
        CHECK(std::abs(lam(i) - ref[static_cast<std::size_t>(i)]) <= 1e-9 * std::max(1.0, ref[0]));
    }
  }
}

TEST_CASE("water-filling examples") {
  const Vector lam = vec({4, 1});
  auto w = waterfill(lam, 2.0);
  CHECK(w.alpha == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.rateBits == doctest::Approx(1.0).epsilon(1e-12));
  w = waterfill(lam, 0.5);
  CHECK(w.alpha == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(w.rateBits == doctest::Approx(3.0).epsilon(1e-12));
  w = waterfill(lam, 5.0);
  CHECK(w.alpha == doctest::Approx(4.0));
  CHECK(w.rateBits == 0.0);
  CHECK_THROWS_AS(waterfill(lam, 0.0), Error);
  CHECK_THROWS_AS(waterfill(lam, 5.5), Error);
}

TEST_CASE("water-filling matches the pairwise-exchange allocation oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.01, 10.0), frac(0.01, 0.999);
  for (int t = 0; t < 100; ++t) {
    const int k = 1 + t % 6;
    std::vector<double> lam(static_cast<std::size_t>(k));
    for (auto& l : lam) l = u(rng);
    double total = 0.0;
    for (double l : lam) total += l;
    const double budget = frac(rng) * total;
    const auto w = waterfill(Eigen::Map<const Vector>(lam.data(), k), budget);
    CHECK(std::abs(w.rateBits - oracle::allocation_rate(lam, budget)) <= 1e-6);
    CHECK(w.perModeDistortion.sum() == doctest::Approx(budget).epsilon(1e-12));
  }
}

TEST_CASE("srdf examples") {
  CHECK(srdf::srdf(validate_covariance(Matrix::Identity(2, 2)), SamplingSet::all(2), 1.0).rateBits ==
        doctest::Approx(1.0).epsilon(1e-12));
  const auto p = srdf::srdf(validate_covariance(pair(0.5)), SamplingSet({0}, 2), 1.0);
  CHECK(p.rateBits == doctest::Approx(0.5 * std::log2(1.25 / 0.25)).epsilon(1e-12));
  CHECK(p.rateBits == doctest::Approx(1.160964).epsilon(1e-6));
  const auto top = srdf::srdf(validate_covariance(pair(0.5)), SamplingSet({0}, 2), 2.0);
  CHECK(top.rateBits == 0.0);
  CHECK(top.trivial);
  const auto above = srdf::srdf(validate_covariance(pair(0.5)), SamplingSet({0}, 2), 3.0);
  CHECK(above.rateBits == 0.0);
  CHECK(above.trivial);
  try {
    srdf::srdf(validate_covariance(pair(0.5)), SamplingSet({0}, 2), 0.75);
    FAIL("floor is not achievable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleDistortion);
  }
}

TEST_CASE("distortion-rate examples") {
  CHECK(distortion_rate(vec({4, 1}), 0.0, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  const auto model = validate_covariance(pair(0.5));
  const SamplingSet a({0}, 2);
  CHECK(distortion_rate(model, a, 0.0) == doctest::Approx(2.0));
  CHECK(std::abs(distortion_rate(model, a, 64.0) - 0.75) <= 1e-9);
  CHECK(std::abs(distortion_rate(model, a, 200.0) - 0.75) <= 1e-9);
}

TEST_CASE("single-component closed form reproduces the engine") {
  const Vector sig = vec({1.0, 1.0});
  Matrix r(2, 2);
  r << 1, 0.5, 0.5, 1;
  CHECK(example1_closed_form(sig, r, 0, 1.0) == doctest::Approx(1.160964).epsilon(1e-6));
  // Independence: scalar rate-distortion function shifted by the unsampled variance.
  const Vector sig3 = vec({1.2, 0.8, 1.5});
  const Matrix id = Matrix::Identity(3, 3);
  const double floor = 0.64 + 2.25;
  CHECK(example1_closed_form(sig3, id, 0, floor + 0.5) == doctest::Approx(0.5 * std::log2(1.44 / 0.5)));
  CHECK(example1_closed_form(sig3, id, 0, 1.44 + floor) == doctest::Approx(0.0));
}

TEST_CASE("eval_dA") {
  const WeightMatrix g{Matrix::Constant(1, 1, 1.25)};
  CHECK(eval_dA(g, vec({1.0}), vec({0.0})) == 1.25);
  CHECK(eval_dA(g, vec({0.3}), vec({0.3})) == 0.0);
  const WeightMatrix id{Matrix::Identity(3, 3)};
  CHECK(eval_dA(id, vec({1, 2, 3}), vec({0, 0, 1})) == doctest::Approx(9.0));
  CHECK_THROWS_AS(eval_dA(id, vec({1, 2}), vec({0, 0})), Error);
}

TEST_CASE("rate curve is nonincreasing and convex; sampling never helps") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 25; ++t) {
    const int m = 2 + t % 5;
    const auto model = validate_covariance(oracle::random_spd(m, rng));
    const double top = max_distortion(model);
    for (const auto& set : all_sets(m)) {
      const double floor = min_distortion(partition(model, set));
      std::vector<double> rates;
      for (int i = 1; i <= 100; ++i) {
        const double d = floor + (top - floor) * i / 100.0;
        rates.push_back(srdf::srdf(model, set, d).rateBits);
        CHECK(rates.back() >= srdf::srdf(model, SamplingSet::all(m), d).rateBits - 1e-12);
      }
      for (std::size_t i = 1; i < rates.size(); ++i) CHECK(rates[i] <= rates[i - 1] + 1e-12);
      for (std::size_t i = 2; i < rates.size(); ++i) CHECK(rates[i] - 2 * rates[i - 1] + rates[i - 2] >= -1e-8);
    }
  }
}

TEST_CASE("distortion-rate inverts the rate curve") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 30; ++t) {
    const int m = 2 + t % 5;
    const auto model = validate_covariance(oracle::random_spd(m, rng));
    for (const auto& set : all_sets(m)) {
      const double floor = min_distortion(partition(model, set));
      const double top = max_distortion(model);
      for (double f : {0.001, 0.05, 0.3, 0.7, 0.999}) {
        const double d = floor + f * (top - floor);
        CHECK(std::abs(distortion_rate(model, set, srdf::srdf(model, set, d).rateBits) - d) <= 1e-8);
      }
    }
  }
}
