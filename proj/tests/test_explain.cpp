#include <doctest.h>

#include <cmath>

#include "jetsurro/dataset.hpp"
#include "jetsurro/explain.hpp"
#include "jetsurro/models.hpp"
#include "jetsurro/rng.hpp"

using namespace jetsurro;
using namespace jetsurro::explain;

namespace {

Matrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = rng.uniform(0.0, 1.0);
  return X;
}

data::Dataset oracle_dataset(std::size_t n, std::uint64_t seed) {
  const auto cases = data::sample_cases(n, data::Ranges::defaults(), seed);
  return data::generate(cases, seed + 1).dataset;
}

}  // namespace

TEST_CASE("exact shapley of a linear model has the closed form") {
  const Vector w = (Vector(5) << 1.5, -2.0, 0.7, 3.0, -1.1).finished();
  const PredictFn model = [&](const Matrix& X) { return Matrix(X * w); };
  const Matrix background = random_matrix(40, 5, 1);
  const Matrix inst = random_matrix(1, 5, 2);
  const auto [phi, base] = exact_shapley(model, 5, inst.row(0), background, 0);
  for (int j = 0; j < 5; ++j)
    CHECK(phi(j) ==
          doctest::Approx(w(j) * (inst(0, j) - background.col(j).mean())).epsilon(1e-10));
  CHECK(base == doctest::Approx((background * w).mean()).epsilon(1e-12));
}

TEST_CASE("instance equal to the single background row gets zero attribution") {
  const PredictFn model = [](const Matrix& X) {
    return Matrix(X.rowwise().sum().array().sin().matrix());
  };
  const Matrix background = random_matrix(1, 4, 3);
  const auto [phi, base] = exact_shapley(model, 4, background.row(0), background, 0);
  CHECK(phi.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(base == doctest::Approx(std::sin(background.row(0).sum())).epsilon(1e-12));
}

TEST_CASE("symmetric features receive equal attributions") {
  const PredictFn model = [](const Matrix& X) {
    return Matrix(X.col(0) + X.col(1));
  };
  Matrix background = random_matrix(30, 2, 4);
  background.col(1) = background.col(0);  // identical marginals
  RowVector inst(2);
  inst << 0.8, 0.8;
  const auto [phi, base] = exact_shapley(model, 2, inst, background, 0);
  CHECK(phi(0) == doctest::Approx(phi(1)).epsilon(1e-12));
}

TEST_CASE("kernel shap exact mode equals enumeration on trained models") {
  const auto ds = oracle_dataset(120, 51);
  const Matrix X = ds.features();
  const Matrix Y = ds.targets();
  const Matrix background = X.topRows(50);
  const Matrix instances = X.bottomRows(2);

  for (const ml::Family family : {ml::Family::kMlp, ml::Family::kRandomForest}) {
    ml::RegressorSpec spec = ml::RegressorSpec::defaults(family);
    spec.seed = 5;
    spec.params[family == ml::Family::kMlp ? "max_iter" : "estimators"] = 40;
    if (family == ml::Family::kRandomForest) spec.params["max_depth"] = 7;
    const auto model = ml::fit(spec, X, Y);
    const auto attr = kernel_shap(*model, instances, background);
    CHECK(attr.exact);
    CHECK(attr.n_coalitions_used == 126);
    for (int i = 0; i < 2; ++i) {
      for (int t = 0; t < 5; ++t) {
        const auto [phi, base] = exact_shapley(*model, instances.row(i), background, t);
        CHECK(base == doctest::Approx(attr.base(t)).epsilon(1e-10));
        for (int j = 0; j < 7; ++j)
          CHECK(std::abs(phi(j) - attr.phi[t](i, j)) < 1e-8);
        // local accuracy
        CHECK(std::abs(attr.base(t) + attr.phi[t].row(i).sum() -
                       attr.predictions(i, t)) < 1e-6);
      }
    }
  }
}

TEST_CASE("sampling mode") {
  const auto ds = oracle_dataset(100, 53);
  const Matrix X = ds.features();
  const Matrix Y = ds.targets();
  ml::RegressorSpec spec = ml::RegressorSpec::defaults(ml::Family::kMlp);
  spec.seed = 7;
  spec.params["max_iter"] = 40;
  const auto model = ml::fit(spec, X, Y);
  const Matrix background = X.topRows(40);
  const Matrix instances = X.bottomRows(2);
  const auto exact = kernel_shap(*model, instances, background);

  SUBCASE("full coalition budget reproduces exact mode") {
    KernelShapConfig cfg;
    cfg.force_sampling = true;
    cfg.n_coalitions = 126;
    cfg.seed = 1;
    const auto sampled = kernel_shap(*model, instances, background, cfg);
    CHECK_FALSE(sampled.exact);
    for (int t = 0; t < 5; ++t)
      CHECK((sampled.phi[t] - exact.phi[t]).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("mean absolute deviation shrinks with the budget") {
    double previous = std::numeric_limits<double>::infinity();
    for (const int budget : {16, 40, 100}) {
      KernelShapConfig cfg;
      cfg.force_sampling = true;
      cfg.n_coalitions = budget;
      cfg.seed = 77;
      const auto sampled = kernel_shap(*model, instances, background, cfg);
      double mad = 0.0;
      for (int t = 0; t < 5; ++t)
        mad += (sampled.phi[t] - exact.phi[t]).cwiseAbs().mean() / 5.0;
      CHECK(mad < previous);
      previous = mad;
    }
  }

  SUBCASE("deterministic per seed and bounded by the budget rules") {
    KernelShapConfig cfg;
    cfg.force_sampling = true;
    cfg.n_coalitions = 30;
    cfg.seed = 9;
    const auto a = kernel_shap(*model, instances, background, cfg);
    const auto b = kernel_shap(*model, instances, background, cfg);
    for (int t = 0; t < 5; ++t)
      CHECK((a.phi[t] - b.phi[t]).cwiseAbs().maxCoeff() == 0.0);
    cfg.n_coalitions = 10;  // below 2n + 2
    CHECK_THROWS_AS(kernel_shap(*model, instances, background, cfg), ConfigError);
  }
}

TEST_CASE("exact kernel regression matches enumeration up to ten features") {
  Rng rng(71);
  for (const int n : {9, 10}) {
    // nonlinear synthetic model over n features, three outputs
    Matrix W(n, 3);
    for (Eigen::Index i = 0; i < W.rows(); ++i)
      for (Eigen::Index j = 0; j < W.cols(); ++j) W(i, j) = rng.uniform(-2.0, 2.0);
    const PredictFn model = [&](const Matrix& X) {
      Matrix base = X * W;
      base.col(0) += (X.col(0).array() * X.col(1).array()).matrix();
      base.col(2) += X.col(2).array().sin().matrix();
      return base;
    };
    const Matrix background = random_matrix(25, n, 72);
    const Matrix instances = random_matrix(2, n, 73);
    const auto attr = kernel_shap(model, n, 3, instances, background);
    CHECK(attr.exact);
    for (int i = 0; i < 2; ++i)
      for (int t = 0; t < 3; ++t) {
        const auto [phi, base] =
            exact_shapley(model, n, instances.row(i), background, t);
        for (int j = 0; j < n; ++j)
          CHECK(std::abs(phi(j) - attr.phi[t](i, j)) < 1e-8);
      }
  }
}

TEST_CASE("a provably ignored feature gets zero attribution") {
  const auto ds = oracle_dataset(90, 55);
  const Matrix X6 = ds.features().leftCols(6);
  const Matrix Y = ds.targets();
  ml::RegressorSpec spec = ml::RegressorSpec::defaults(ml::Family::kGbt);
  spec.seed = 3;
  spec.params["estimators"] = 30;
  const auto model = ml::fit(spec, X6, Y);
  // Wrapper grafts a 7th input the model never sees.
  const PredictFn wrapped = [&](const Matrix& X7) {
    return model->predict(X7.leftCols(6));
  };
  const Matrix background = ds.features().topRows(40);
  const Matrix instances = ds.features().bottomRows(3);
  const auto attr = kernel_shap(wrapped, 7, 5, instances, background);
  for (int t = 0; t < 5; ++t)
    CHECK(attr.phi[t].col(6).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("bar data ranks by mean absolute attribution") {
  Attribution attr;
  attr.feature_names = {"a", "b", "c"};
  attr.target_names = {"y"};
  attr.base = Vector::Zero(1);
  attr.feature_values = random_matrix(2, 3, 6);
  attr.predictions = Matrix::Zero(2, 1);
  Matrix phi(2, 3);
  phi << 1.0, -3.0, 0.5, -1.0, 3.0, 0.5;
  attr.phi = {phi};
  const auto bars = bar_data(attr);
  REQUIRE(bars.size() == 1);
  CHECK(bars[0][0].feature == "b");
  CHECK(bars[0][0].mean_abs_phi == doctest::Approx(3.0));
  CHECK(bars[0][1].feature == "a");
  CHECK(bars[0][2].feature == "c");

  SUBCASE("zero attribution keeps the original order") {
    attr.phi = {Matrix::Zero(2, 3)};
    const auto zero = bar_data(attr);
    CHECK(zero[0][0].feature == "a");
    CHECK(zero[0][1].feature == "b");
    CHECK(zero[0][2].feature == "c");
  }

  SUBCASE("single instance bar equals its absolute phi") {
    attr.feature_values = random_matrix(1, 3, 7);
    attr.predictions = Matrix::Zero(1, 1);
    Matrix one(1, 3);
    one << -2.0, 1.0, 0.0;
    attr.phi = {one};
    const auto bars1 = bar_data(attr);
    CHECK(bars1[0][0].mean_abs_phi == doctest::Approx(2.0));
  }
}

TEST_CASE("summary, dependence and waterfall products") {
  Attribution attr;
  attr.feature_names = {"a", "b"};
  attr.target_names = {"y"};
  attr.base = Vector::Constant(1, 10.0);
  Matrix values(3, 2);
  values << 0.3, 5.0, 0.1, 6.0, 0.2, 7.0;
  attr.feature_values = values;
  Matrix phi(3, 2);
  phi << 1.0, -0.5, 2.0, -0.5, 3.0, -0.5;
  attr.phi = {phi};
  attr.predictions.resize(3, 1);
  for (int i = 0; i < 3; ++i) attr.predictions(i, 0) = 10.0 + phi.row(i).sum();

  const auto pts = summary_data(attr, 0, 0);
  REQUIRE(pts.size() == 3);
  CHECK(pts[1].phi == 2.0);
  CHECK(pts[1].raw == 0.1);

  const auto series = dependence_data(attr, "a", 0);
  REQUIRE(series.size() == 3);
  CHECK(series[0].first == 0.1);  // sorted by raw value
  CHECK(series[0].second == 2.0);
  CHECK(series[2].first == 0.3);
  CHECK_THROWS_AS(dependence_data(attr, "zzz", 0), NameError);

  SUBCASE("constant phi gives a flat series") {
    const auto flat = dependence_data(attr, "b", 0);
    for (const auto& [raw, p] : flat) CHECK(p == -0.5);
  }

  const auto steps = waterfall_data(attr, 0, 0);
  REQUIRE(steps.size() == 4);  // base + 2 features + prediction
  CHECK(steps.front().label == "base");
  CHECK(steps.front().running == 10.0);
  CHECK(steps[1].label == "a");  // |1.0| > |-0.5|
  CHECK(steps.back().label == "prediction");
  CHECK(std::abs(steps.back().running - attr.predictions(0, 0)) < 1e-6);
}

TEST_CASE("regime flags") {
  const phys::JetCase validation{45.0, 0.07, 0.15, 0.0058, 0.515, 1034.0, 997.0};
  const auto flags = regime_flags(validation);
  CHECK_FALSE(flags.coanda);
  CHECK_FALSE(flags.shallow);
  CHECK(flags.coanda_ratio == doctest::Approx(1.144).epsilon(1e-3));
  CHECK(flags.shallow_ratio == doctest::Approx(0.4334).epsilon(1e-3));

  SUBCASE("deep coanda case") {
    phys::JetCase c = validation;
    const auto dq = phys::derive(c);
    c.h_p = 0.038 * dq.L_M;
    CHECK(regime_flags(c).coanda);
  }

  SUBCASE("shallow threshold interpolates between the regime anchors") {
    // at 45 degrees the threshold is 0.65; nudge the ratio just above
    phys::JetCase c = validation;
    const auto dq = phys::derive(c);
    c.H = c.d * dq.Fr / 0.65 * (1.0 - 1e-9);
    c.h_p = c.H / 2.0 - 1e-6;
    const auto f45 = regime_flags(c);
    CHECK(f45.shallow_threshold == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(f45.shallow);

    phys::JetCase c30 = c;
    c30.theta = 30.0;
    CHECK(regime_flags(c30).shallow_threshold == doctest::Approx(0.95).epsilon(1e-12));
    phys::JetCase steep = c;
    steep.theta = 75.0;
    CHECK(regime_flags(steep).shallow_threshold == doctest::Approx(0.3).epsilon(1e-12));
  }
}
