#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "jetsurro/dataset.hpp"
#include "jetsurro/eval.hpp"
#include "jetsurro/rng.hpp"

using namespace jetsurro;
using namespace jetsurro::eval;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

data::Dataset oracle_dataset(std::size_t n, std::uint64_t seed) {
  const auto cases = data::sample_cases(n, data::Ranges::defaults(), seed);
  return data::generate(cases, seed + 1).dataset;
}

ml::RegressorSpec fast_gbt() {
  ml::RegressorSpec spec = ml::RegressorSpec::defaults(ml::Family::kGbt);
  spec.params["estimators"] = 25;
  spec.seed = 2;
  return spec;
}

}  // namespace

TEST_CASE("rmse") {
  CHECK(rmse(vec({1, 2, 3}), vec({1, 2, 3})) == 0.0);
  CHECK(rmse(vec({0, 0}), vec({3, 4})) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK(rmse(vec({5}), vec({2})) == doctest::Approx(3.0));
  CHECK_THROWS_AS(rmse(vec({1, 2}), vec({1})), ShapeError);
}

TEST_CASE("rmse properties") {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    Vector a(6), b(6);
    for (int i = 0; i < 6; ++i) {
      a(i) = rng.uniform(-5, 5);
      b(i) = rng.uniform(-5, 5);
    }
    const double c = rng.uniform(0.1, 4.0);
    CHECK(rmse(a, b) == doctest::Approx(rmse(b, a)).epsilon(1e-14));
    CHECK(rmse(a, a) == 0.0);
    CHECK(rmse(c * a, c * b) == doctest::Approx(c * rmse(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("r2") {
  CHECK(r2(vec({1, 2, 3}), vec({1, 2, 3})) == 1.0);
  const double mean = 2.0;
  CHECK(r2(vec({1, 2, 3}), vec({mean, mean, mean})) == doctest::Approx(0.0));
  CHECK(r2(vec({1, 2, 3}), vec({3, 2, 1})) == doctest::Approx(-3.0));
  CHECK_THROWS_AS(r2(vec({2, 2, 2}), vec({1, 2, 3})), DomainError);
  CHECK_THROWS_AS(r2(vec({1}), vec({1})), ShapeError);
}

TEST_CASE("r2 is invariant under common affine transforms") {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    Vector y(8), p(8);
    for (int i = 0; i < 8; ++i) {
      y(i) = rng.uniform(-5, 5);
      p(i) = rng.uniform(-5, 5);
    }
    const double alpha = rng.uniform(0.2, 3.0), beta = rng.uniform(-10, 10);
    const Vector ya = alpha * y + Vector::Constant(8, beta);
    const Vector pa = alpha * p + Vector::Constant(8, beta);
    CHECK(r2(y, p) == doctest::Approx(r2(ya, pa)).epsilon(1e-10));
  }
}

TEST_CASE("fold construction") {
  std::vector<int> canonical(500);
  std::iota(canonical.begin(), canonical.end(), 0);
  const auto folds = make_folds(canonical, 5, 9);
  REQUIRE(folds.size() == 5);
  std::set<int> seen;
  for (const auto& fold : folds) {
    CHECK(fold.size() == 100);
    for (int i : fold) CHECK(seen.insert(i).second);
  }
  CHECK(seen.size() == 500);
  CHECK_THROWS_AS(make_folds(canonical, 1, 9), ConfigError);
  std::vector<int> three = {0, 1, 2};
  CHECK_THROWS_AS(make_folds(three, 5, 9), SizeError);
}

TEST_CASE("kfold summarizes per-target scores with an averages row") {
  const auto ds = oracle_dataset(60, 41);
  const auto result = kfold(fast_gbt(), ds, 5, 7);
  REQUIRE(result.per_target.size() == 5);
  double r2_sum = 0.0, rmse_sum = 0.0;
  for (const auto& t : result.per_target) {
    CHECK(t.r2_mean <= 1.0);
    CHECK(t.rmse_mean >= 0.0);
    r2_sum += t.r2_mean;
    rmse_sum += t.rmse_mean;
  }
  CHECK(result.average.r2_mean == doctest::Approx(r2_sum / 5.0).epsilon(1e-12));
  CHECK(result.average.rmse_mean == doctest::Approx(rmse_sum / 5.0).epsilon(1e-12));
}

TEST_CASE("kfold is invariant to dataset row permutations") {
  const auto ds = oracle_dataset(50, 43);
  data::Dataset shuffled = ds;
  Rng rng(77);
  rng.shuffle(shuffled.rows);
  bool same_order = true;
  for (std::size_t i = 0; i < ds.rows.size(); ++i)
    if (!(shuffled.rows[i].c == ds.rows[i].c)) {
      same_order = false;
      break;
    }
  REQUIRE_FALSE(same_order);
  const auto a = kfold(fast_gbt(), ds, 5, 7);
  const auto b = kfold(fast_gbt(), shuffled, 5, 7);
  for (std::size_t j = 0; j < 5; ++j) {
    CHECK(a.per_target[j].r2_mean == b.per_target[j].r2_mean);
    CHECK(a.per_target[j].rmse_mean == b.per_target[j].rmse_mean);
    CHECK(a.per_target[j].r2_std == b.per_target[j].r2_std);
  }
}

TEST_CASE("leave-one-out folds flag undefined R2 but keep RMSE") {
  auto ds = oracle_dataset(40, 45);
  ds.rows.resize(10);
  const auto result = kfold(fast_gbt(), ds, 10, 3);
  CHECK(result.flagged.size() == 50);  // every fold x target has one row
  for (const auto& t : result.per_target) CHECK(t.rmse_mean >= 0.0);
}

TEST_CASE("learning curve shapes and errors") {
  const auto ds = oracle_dataset(80, 47);
  const Matrix X = ds.features();
  const Matrix Y = ds.targets();

  const auto single = learning_curve_xy(fast_gbt(), X, Y, nullptr, {40}, 4, 5);
  CHECK(single.points.size() == 1);
  CHECK(single.points[0].size == 40);
  CHECK(single.plateau_size == 40);  // final size always qualifies

  CHECK_THROWS_AS(learning_curve_xy(fast_gbt(), X, Y, nullptr, {40, 200}, 4, 5),
                  SizeError);
  CHECK_THROWS_AS(learning_curve_xy(fast_gbt(), X, Y, nullptr, {40, 30}, 4, 5),
                  ConfigError);
  CHECK_THROWS_AS(learning_curve_xy(fast_gbt(), X, Y, nullptr, {6}, 4, 5), SizeError);
}

TEST_CASE("eval report CSV layout") {
  const auto ds = oracle_dataset(60, 49);
  const auto [train, val] = data::split(ds, 0.9, 1);
  EvalReport report;
  report.cv = kfold(fast_gbt(), train, 5, 1);
  const auto model = ml::fit(fast_gbt(), train.features(), train.targets());
  report.validation = validate(*model, val.features(), val.targets());

  std::ostringstream kf;
  report.write_kfold_csv(kf);
  CHECK(kf.str().rfind("target,r2_mean,r2_std,rmse_mean,rmse_std\n", 0) == 0);
  CHECK(kf.str().find("\naverage,") != std::string::npos);
  CHECK(kf.str().find("x_m,") != std::string::npos);

  std::ostringstream vccsv;
  report.write_validation_csv(vccsv);
  CHECK(vccsv.str().rfind("target,r2,rmse\n", 0) == 0);

  const auto j = report.to_json();
  CHECK(j.at("kfold").size() == 5);
  CHECK(j.at("validation").size() == 5);
}
