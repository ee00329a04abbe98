#include "jetsurro/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "jetsurro/errors.hpp"
#include "jetsurro/numfmt.hpp"
#include "jetsurro/rng.hpp"

namespace jetsurro::eval {

double rmse(const Vector& observed, const Vector& predicted) {
  if (observed.size() != predicted.size() || observed.size() == 0)
    throw ShapeError("rmse: vectors must have equal nonzero length");
  return std::sqrt((observed - predicted).squaredNorm() /
                   static_cast<double>(observed.size()));
}

double r2(const Vector& observed, const Vector& predicted) {
  if (observed.size() != predicted.size())
    throw ShapeError("r2: vectors must have equal length");
  if (observed.size() < 2) throw ShapeError("r2: need at least 2 points");
  const double mean = observed.mean();
  const double ss_tot = (observed.array() - mean).matrix().squaredNorm();
  if (ss_tot == 0.0)
    throw DomainError("r2: observed values are constant, R^2 undefined");
  const double ss_res = (observed - predicted).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

std::vector<int> canonical_order(const Matrix& X, const Matrix& Y) {
  std::vector<int> idx(X.rows());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      if (X(a, j) != X(b, j)) return X(a, j) < X(b, j);
    }
    for (Eigen::Index j = 0; j < Y.cols(); ++j) {
      const double ya = Y(a, j), yb = Y(b, j);
      const bool fa = std::isfinite(ya), fb = std::isfinite(yb);
      if (fa != fb) return fa;  // rows with absent targets order last
      if (fa && ya != yb) return ya < yb;
    }
    return false;
  });
  return idx;
}

std::vector<std::vector<int>> make_folds(const std::vector<int>& canonical, int k,
                                         std::uint64_t seed) {
  if (k < 2) throw ConfigError("kfold: k must be >= 2");
  if (canonical.size() < static_cast<std::size_t>(k))
    throw SizeError("kfold: fewer rows than folds");
  std::vector<int> order = canonical;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::vector<int>> folds(k);
  const std::size_t base = order.size() / k, extra = order.size() % k;
  std::size_t at = 0;
  for (int f = 0; f < k; ++f) {
    const std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
    folds[f].assign(order.begin() + at, order.begin() + at + len);
    at += len;
  }
  return folds;
}

namespace {

struct FoldScores {
  // Per target: R^2 values of folds where it was defined, RMSE of all folds.
  std::vector<std::vector<double>> r2_values;
  std::vector<std::vector<double>> rmse_values;
  std::vector<std::string> flagged;
};

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double acc = 0.0;
  for (double x : v) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(v.size() - 1));
}

void score_fold(const Matrix& Y, const Mask* mask, const Matrix& pred,
                const std::vector<int>& test_rows,
                const std::vector<std::string>& target_names, int fold_index,
                FoldScores& scores) {
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    std::vector<double> obs, est;
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      if (mask && !(*mask)(test_rows[i], j)) continue;
      obs.push_back(Y(test_rows[i], j));
      est.push_back(pred(static_cast<Eigen::Index>(i), j));
    }
    if (obs.empty()) {
      scores.flagged.push_back("fold " + std::to_string(fold_index) + " target " +
                               target_names[j] + ": no observed values");
      continue;
    }
    const Vector vo = Eigen::Map<const Vector>(obs.data(), obs.size());
    const Vector ve = Eigen::Map<const Vector>(est.data(), est.size());
    scores.rmse_values[j].push_back(rmse(vo, ve));
    try {
      scores.r2_values[j].push_back(r2(vo, ve));
    } catch (const Error& e) {
      scores.flagged.push_back("fold " + std::to_string(fold_index) + " target " +
                               target_names[j] + ": R^2 undefined (" + e.what() +
                               "), excluded");
    }
  }
}

KfoldResult summarize(const FoldScores& scores,
                      const std::vector<std::string>& target_names) {
  KfoldResult out;
  out.target_names = target_names;
  out.flagged = scores.flagged;
  for (std::size_t j = 0; j < target_names.size(); ++j) {
    TargetScore ts;
    if (!scores.r2_values[j].empty()) {
      ts.r2_mean = mean_of(scores.r2_values[j]);
      ts.r2_std = std_of(scores.r2_values[j]);
    }
    if (!scores.rmse_values[j].empty()) {
      ts.rmse_mean = mean_of(scores.rmse_values[j]);
      ts.rmse_std = std_of(scores.rmse_values[j]);
    }
    out.per_target.push_back(ts);
  }
  const auto n = static_cast<double>(out.per_target.size());
  for (const TargetScore& ts : out.per_target) {
    out.average.r2_mean += ts.r2_mean / n;
    out.average.r2_std += ts.r2_std / n;
    out.average.rmse_mean += ts.rmse_mean / n;
    out.average.rmse_std += ts.rmse_std / n;
  }
  return out;
}

}  // namespace

KfoldResult kfold_xy(const ml::RegressorSpec& spec, const Matrix& X, const Matrix& Y,
                     const Mask* mask, const std::vector<std::vector<int>>& folds,
                     const std::vector<std::string>& target_names) {
  FoldScores scores;
  scores.r2_values.resize(Y.cols());
  scores.rmse_values.resize(Y.cols());

  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<int> train;
    for (std::size_t g = 0; g < folds.size(); ++g)
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());

    Matrix Xtr(train.size(), X.cols()), Ytr(train.size(), Y.cols());
    Mask mtr(train.size(), Y.cols());
    for (std::size_t i = 0; i < train.size(); ++i) {
      Xtr.row(i) = X.row(train[i]);
      Ytr.row(i) = Y.row(train[i]);
      for (Eigen::Index j = 0; j < Y.cols(); ++j)
        mtr(i, j) = !mask || (*mask)(train[i], j);
    }
    const auto model = ml::fit(spec, Xtr, Ytr, &mtr);

    Matrix Xte(folds[f].size(), X.cols());
    for (std::size_t i = 0; i < folds[f].size(); ++i)
      Xte.row(i) = X.row(folds[f][i]);
    score_fold(Y, mask, model->predict(Xte), folds[f], target_names,
               static_cast<int>(f), scores);
  }
  return summarize(scores, target_names);
}

KfoldResult kfold(const ml::RegressorSpec& spec, const data::Dataset& ds, int k,
                  std::uint64_t seed) {
  const Matrix X = ds.features();
  const Matrix Y = ds.targets();
  const Mask mask = ds.target_mask();
  const auto folds = make_folds(canonical_order(X, Y), k, seed);
  std::vector<std::string> names;
  for (const char* n : data::kTargetNames) names.emplace_back(n);
  return kfold_xy(spec, X, Y, &mask, folds, names);
}

ValidationResult validate(const ml::TrainedModel& model, const Matrix& X,
                          const Matrix& Y, const Mask* mask) {
  ValidationResult out;
  out.target_names = model.target_names();
  const Matrix pred = model.predict(X);
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    std::vector<double> obs, est;
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      if (mask && !(*mask)(i, j)) continue;
      obs.push_back(Y(i, j));
      est.push_back(pred(i, j));
    }
    const Vector vo = Eigen::Map<const Vector>(obs.data(), obs.size());
    const Vector ve = Eigen::Map<const Vector>(est.data(), est.size());
    out.rmse_per_target.push_back(rmse(vo, ve));
    out.r2_per_target.push_back(r2(vo, ve));
  }
  out.r2_avg = mean_of(out.r2_per_target);
  out.rmse_avg = mean_of(out.rmse_per_target);
  return out;
}

void EvalReport::write_kfold_csv(std::ostream& out) const {
  out << "target,r2_mean,r2_std,rmse_mean,rmse_std\n";
  for (std::size_t j = 0; j < cv.target_names.size(); ++j) {
    const TargetScore& t = cv.per_target[j];
    out << cv.target_names[j] << ',' << fmt_double(t.r2_mean) << ','
        << fmt_double(t.r2_std) << ',' << fmt_double(t.rmse_mean) << ','
        << fmt_double(t.rmse_std) << '\n';
  }
  out << "average," << fmt_double(cv.average.r2_mean) << ','
      << fmt_double(cv.average.r2_std) << ',' << fmt_double(cv.average.rmse_mean)
      << ',' << fmt_double(cv.average.rmse_std) << '\n';
}

void EvalReport::write_validation_csv(std::ostream& out) const {
  out << "target,r2,rmse\n";
  for (std::size_t j = 0; j < validation.target_names.size(); ++j) {
    out << validation.target_names[j] << ','
        << fmt_double(validation.r2_per_target[j]) << ','
        << fmt_double(validation.rmse_per_target[j]) << '\n';
  }
  out << "average," << fmt_double(validation.r2_avg) << ','
      << fmt_double(validation.rmse_avg) << '\n';
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json jcv = nlohmann::json::array();
  for (std::size_t j = 0; j < cv.target_names.size(); ++j) {
    jcv.push_back({{"target", cv.target_names[j]},
                   {"r2_mean", cv.per_target[j].r2_mean},
                   {"r2_std", cv.per_target[j].r2_std},
                   {"rmse_mean", cv.per_target[j].rmse_mean},
                   {"rmse_std", cv.per_target[j].rmse_std}});
  }
  nlohmann::json jval = nlohmann::json::array();
  for (std::size_t j = 0; j < validation.target_names.size(); ++j) {
    jval.push_back({{"target", validation.target_names[j]},
                    {"r2", validation.r2_per_target[j]},
                    {"rmse", validation.rmse_per_target[j]}});
  }
  return {{"kfold", std::move(jcv)},
          {"kfold_average",
           {{"r2_mean", cv.average.r2_mean},
            {"r2_std", cv.average.r2_std},
            {"rmse_mean", cv.average.rmse_mean},
            {"rmse_std", cv.average.rmse_std}}},
          {"kfold_flagged", cv.flagged},
          {"validation", std::move(jval)},
          {"validation_average",
           {{"r2", validation.r2_avg}, {"rmse", validation.rmse_avg}}}};
}

LearningCurve learning_curve_xy(const ml::RegressorSpec& spec, const Matrix& X,
                                const Matrix& Y, const Mask* mask,
                                const std::vector<std::size_t>& sizes, int k,
                                std::uint64_t seed) {
  if (sizes.empty()) throw ConfigError("learning_curve: no sizes");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 2 * static_cast<std::size_t>(k))
      throw SizeError("learning_curve: every size must be >= 2k");
    if (i > 0 && sizes[i] <= sizes[i - 1])
      throw ConfigError("learning_curve: sizes must be strictly increasing");
    if (sizes[i] > static_cast<std::size_t>(X.rows()))
      throw SizeError("learning_curve: size exceeds dataset");
  }

  std::vector<int> order = canonical_order(X, Y);
  Rng rng(seed);
  rng.shuffle(order);

  LearningCurve curve;
  for (const std::size_t size : sizes) {
    const std::vector<int> subset(order.begin(), order.begin() + size);
    // Folds within the subset, reusing the shuffled order.
    std::vector<std::vector<int>> folds(k);
    const std::size_t base = size / k, extra = size % k;
    std::size_t at = 0;
    for (int f = 0; f < k; ++f) {
      const std::size_t len = base + (static_cast<std::size_t>(f) < extra ? 1 : 0);
      folds[f].assign(subset.begin() + at, subset.begin() + at + len);
      at += len;
    }

    std::vector<double> train_scores, cv_scores;
    for (int f = 0; f < k; ++f) {
      std::vector<int> train;
      for (int g = 0; g < k; ++g)
        if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
      Matrix Xtr(train.size(), X.cols()), Ytr(train.size(), Y.cols());
      Mask mtr(train.size(), Y.cols());
      for (std::size_t i = 0; i < train.size(); ++i) {
        Xtr.row(i) = X.row(train[i]);
        Ytr.row(i) = Y.row(train[i]);
        for (Eigen::Index j = 0; j < Y.cols(); ++j)
          mtr(i, j) = !mask || (*mask)(train[i], j);
      }
      const auto model = ml::fit(spec, Xtr, Ytr, &mtr);

      const auto score_on = [&](const std::vector<int>& rows) {
        Matrix Xq(rows.size(), X.cols());
        for (std::size_t i = 0; i < rows.size(); ++i) Xq.row(i) = X.row(rows[i]);
        const Matrix pred = model->predict(Xq);
        double acc = 0.0;
        int counted = 0;
        for (Eigen::Index j = 0; j < Y.cols(); ++j) {
          std::vector<double> obs, est;
          for (std::size_t i = 0; i < rows.size(); ++i) {
            if (mask && !(*mask)(rows[i], j)) continue;
            obs.push_back(Y(rows[i], j));
            est.push_back(pred(static_cast<Eigen::Index>(i), j));
          }
          if (obs.size() < 2) continue;
          const Vector vo = Eigen::Map<const Vector>(obs.data(), obs.size());
          const Vector ve = Eigen::Map<const Vector>(est.data(), est.size());
          try {
            acc += r2(vo, ve);
            ++counted;
          } catch (const DomainError&) {
            // constant observed in this slice; skip the target
          }
        }
        if (counted == 0) throw DataError("learning_curve: R^2 undefined everywhere");
        return acc / counted;
      };
      train_scores.push_back(score_on(train));
      cv_scores.push_back(score_on(folds[f]));
    }

    LearningCurvePoint p;
    p.size = size;
    p.train_mean = mean_of(train_scores);
    p.train_std = std_of(train_scores);
    p.cv_mean = mean_of(cv_scores);
    p.cv_std = std_of(cv_scores);
    curve.points.push_back(p);
  }

  // Plateau rule: first size whose CV mean is within one pooled std of the
  // final size's mean. The band is floored at 0.01 R^2 so that near-noiseless
  // folds (pooled std ~1e-3) do not declare still-stagnant growth unreached.
  const LearningCurvePoint& last = curve.points.back();
  for (const LearningCurvePoint& p : curve.points) {
    const double pooled =
        std::sqrt(0.5 * (p.cv_std * p.cv_std + last.cv_std * last.cv_std));
    if (std::abs(last.cv_mean - p.cv_mean) <= std::max(pooled, 0.01)) {
      curve.plateau_size = p.size;
      break;
    }
  }
  return curve;
}

LearningCurve learning_curve(const ml::RegressorSpec& spec, const data::Dataset& ds,
                             const std::vector<std::size_t>& sizes, int k,
                             std::uint64_t seed) {
  const Matrix X = ds.features();
  const Matrix Y = ds.targets();
  const Mask mask = ds.target_mask();
  return learning_curve_xy(spec, X, Y, &mask, sizes, k, seed);
}

void LearningCurve::write_csv(std::ostream& out) const {
  out << "size,train_mean,train_std,cv_mean,cv_std,plateau\n";
  for (const LearningCurvePoint& p : points) {
    out << p.size << ',' << fmt_double(p.train_mean) << ',' << fmt_double(p.train_std)
        << ',' << fmt_double(p.cv_mean) << ',' << fmt_double(p.cv_std) << ','
        << (plateau_size && *plateau_size == p.size ? "1" : "0") << '\n';
  }
}

}  // namespace jetsurro::eval
