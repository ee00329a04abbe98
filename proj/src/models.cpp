#include "jetsurro/models.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "jetsurro/errors.hpp"
#include "jetsurro/lbfgs.hpp"
#include "jetsurro/mlp.hpp"
#include "jetsurro/numfmt.hpp"
#include "jetsurro/parallel.hpp"
#include "jetsurro/rng.hpp"
#include "jetsurro/tree.hpp"

namespace jetsurro::ml {

using nlohmann::json;

std::string family_name(Family f) {
  switch (f) {
    case Family::kMlp: return "mlp";
    case Family::kRandomForest: return "rf";
    case Family::kGbt: return "gbt";
  }
  throw ConfigError("unknown model family");
}

Family family_from_name(const std::string& name) {
  if (name == "mlp") return Family::kMlp;
  if (name == "rf" || name == "random_forest") return Family::kRandomForest;
  if (name == "gbt") return Family::kGbt;
  throw ConfigError("unknown model family '" + name + "'");
}

RegressorSpec RegressorSpec::defaults(Family f) {
  RegressorSpec s;
  s.family = f;
  switch (f) {
    case Family::kMlp:
      s.params = {{"hidden_layers", 3.0}, {"neurons", 25.0}, {"l2_alpha", 0.05},
                  {"max_iter", 500.0},    {"grad_tol", 1e-6}};
      break;
    case Family::kRandomForest:
      s.params = {{"estimators", 250.0}, {"max_depth", 90.0}, {"min_samples_leaf", 1.0}};
      break;
    case Family::kGbt:
      s.params = {{"estimators", 300.0}, {"max_depth", 2.0}, {"learning_rate", 0.1}};
      break;
  }
  return s;
}

double RegressorSpec::get(const std::string& name) const {
  if (const auto it = params.find(name); it != params.end()) return it->second;
  const RegressorSpec def = defaults(family);
  if (const auto it = def.params.find(name); it != def.params.end()) return it->second;
  throw ConfigError("unknown hyperparameter '" + name + "' for family " +
                    family_name(family));
}

RegressorSpec RegressorSpec::with(const std::string& name, double value) const {
  RegressorSpec s = *this;
  s.params[name] = value;
  return s;
}

Matrix TrainedModel::predict(const Matrix& X) const {
  if (X.cols() != n_features())
    throw ShapeError("predict: expected " + std::to_string(n_features()) +
                     " features, got " + std::to_string(X.cols()));
  return predict_scaled(input_scaler_.apply(X));
}

namespace {

std::vector<std::string> default_names(const std::string& stem, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(stem + std::to_string(i));
  return names;
}

json scaler_to_json(const data::ScalerParams& s) {
  json j = json::object();
  for (std::size_t i = 0; i < s.names.size(); ++i)
    j[s.names[i]] = {s.min_max[i].first, s.min_max[i].second};
  return j;
}

data::ScalerParams scaler_from_json(const json& j,
                                    const std::vector<std::string>& names) {
  data::ScalerParams s;
  s.names = names;
  for (const auto& name : names) {
    const auto& pair = j.at(name);
    s.min_max.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  return s;
}

// ---------------------------------------------------------------------------
// MLP
// ---------------------------------------------------------------------------

/// Per-target z-score standardization for MLP training. Min-max target
/// scaling concentrates these heavy-tailed targets near zero, where the L2
/// penalty dominates the data term and caps the attainable fit;
/// standardization keeps every target at unit scale. A constant target maps
/// to 0 (std floored at 1).
struct TargetStandardizer {
  Vector mean, sd;

  Matrix apply(const Matrix& Y) const {
    return ((Y.rowwise() - mean.transpose()).array().rowwise() /
            sd.transpose().array())
        .matrix();
  }
  Matrix invert(const Matrix& Ys) const {
    return ((Ys.array().rowwise() * sd.transpose().array()).rowwise() +
            mean.transpose().array())
        .matrix();
  }
};

class MlpModel final : public TrainedModel {
 public:
  MlpArchitecture arch;
  MlpWeights weights;
  TargetStandardizer target_scaler;

 protected:
  Matrix predict_scaled(const Matrix& Xs) const override {
    return target_scaler.invert(mlp_forward(weights, Xs));
  }

  nlohmann::json params_json() const override {
    json layers = json::array();
    for (std::size_t l = 0; l < weights.W.size(); ++l) {
      json w_rows = json::array();
      for (Eigen::Index r = 0; r < weights.W[l].rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < weights.W[l].cols(); ++c)
          row.push_back(weights.W[l](r, c));
        w_rows.push_back(std::move(row));
      }
      json bias = json::array();
      for (Eigen::Index r = 0; r < weights.b[l].size(); ++r)
        bias.push_back(weights.b[l](r));
      layers.push_back({{"weights", std::move(w_rows)}, {"bias", std::move(bias)}});
    }
    json mean = json::array(), sd = json::array();
    for (Eigen::Index j = 0; j < target_scaler.mean.size(); ++j) {
      mean.push_back(target_scaler.mean(j));
      sd.push_back(target_scaler.sd(j));
    }
    return {{"layers", std::move(layers)},
            {"target_mean", std::move(mean)},
            {"target_std", std::move(sd)}};
  }

  friend std::unique_ptr<TrainedModel> TrainedModel::from_json(const json&);
  friend std::unique_ptr<TrainedModel> fit_mlp(const RegressorSpec&, const Matrix&,
                                               const Matrix&, const Mask*);
};

std::unique_ptr<TrainedModel> fit_mlp(const RegressorSpec& spec, const Matrix& Xs,
                                      const Matrix& Y, const Mask* mask) {
  auto model = std::make_unique<MlpModel>();
  model->arch.n_in = static_cast<int>(Xs.cols());
  model->arch.n_out = static_cast<int>(Y.cols());
  model->arch.hidden_layers = static_cast<int>(spec.get("hidden_layers"));
  model->arch.neurons = static_cast<int>(spec.get("neurons"));

  TargetStandardizer ts;
  ts.mean.resize(Y.cols());
  ts.sd.resize(Y.cols());
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    double sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      if (mask && !(*mask)(i, j)) continue;
      sum += Y(i, j);
      ++count;
    }
    ts.mean(j) = sum / static_cast<double>(count);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      if (mask && !(*mask)(i, j)) continue;
      acc += (Y(i, j) - ts.mean(j)) * (Y(i, j) - ts.mean(j));
    }
    const double sd = std::sqrt(acc / static_cast<double>(count - 1));
    ts.sd(j) = sd > 0.0 ? sd : 1.0;
  }
  model->target_scaler = ts;

  Matrix Ys = ts.apply(Y);
  if (mask) Ys = mask->select(Ys, Matrix::Zero(Ys.rows(), Ys.cols()));

  const double alpha = spec.get("l2_alpha");
  const Objective objective = [&](const Vector& w, Vector& grad) {
    return mlp_loss_grad(w, model->arch, Xs, Ys, mask, alpha, &grad);
  };

  Vector w = init_weights(model->arch, spec.seed).flatten();
  LbfgsOptions opt;
  opt.max_iterations = static_cast<int>(spec.get("max_iter"));
  opt.grad_tol = spec.get("grad_tol");
  const LbfgsReport rep = lbfgs_minimize(objective, w, opt, &model->training_log_);
  model->weights = MlpWeights::unflatten(w, model->arch);
  model->training_log_.push_back(
      "lbfgs: iterations=" + std::to_string(rep.iterations) +
      " loss=" + fmt_double(rep.loss) + " grad_norm=" + fmt_double(rep.grad_norm) +
      (rep.converged ? " converged" : " max_iter"));
  return model;
}

// ---------------------------------------------------------------------------
// Trees: random forest and gradient boosting
// ---------------------------------------------------------------------------

json trees_to_json(const std::vector<RegressionTree>& trees) {
  json arr = json::array();
  for (const auto& tree : trees) {
    json feature = json::array(), threshold = json::array(), left = json::array(),
         right = json::array(), value = json::array();
    for (const TreeNode& n : tree.nodes()) {
      feature.push_back(n.feature);
      threshold.push_back(n.threshold);
      left.push_back(n.left);
      right.push_back(n.right);
      value.push_back(n.value);
    }
    arr.push_back({{"feature", std::move(feature)},
                   {"threshold", std::move(threshold)},
                   {"left", std::move(left)},
                   {"right", std::move(right)},
                   {"value", std::move(value)}});
  }
  return arr;
}

std::vector<RegressionTree> trees_from_json(const json& arr) {
  std::vector<RegressionTree> trees(arr.size());
  for (std::size_t t = 0; t < arr.size(); ++t) {
    const json& jt = arr[t];
    const std::size_t n = jt.at("feature").size();
    auto& nodes = trees[t].mutable_nodes();
    nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      nodes[i].feature = jt.at("feature")[i].get<int>();
      nodes[i].threshold = jt.at("threshold")[i].get<double>();
      nodes[i].left = jt.at("left")[i].get<int>();
      nodes[i].right = jt.at("right")[i].get<int>();
      nodes[i].value = jt.at("value")[i].get<double>();
    }
  }
  return trees;
}

class ForestModel final : public TrainedModel {
 public:
  std::vector<std::vector<RegressionTree>> per_target;

 protected:
  Matrix predict_scaled(const Matrix& Xs) const override {
    Matrix out(Xs.rows(), static_cast<Eigen::Index>(per_target.size()));
    for (std::size_t t = 0; t < per_target.size(); ++t) {
      Vector acc = Vector::Zero(Xs.rows());
      for (const auto& tree : per_target[t]) acc += tree.predict(Xs);
      out.col(static_cast<Eigen::Index>(t)) =
          acc / static_cast<double>(per_target[t].size());
    }
    return out;
  }

  nlohmann::json params_json() const override {
    json targets = json::array();
    for (const auto& trees : per_target)
      targets.push_back({{"trees", trees_to_json(trees)}});
    return {{"targets", std::move(targets)}};
  }

  friend std::unique_ptr<TrainedModel> TrainedModel::from_json(const json&);
  friend std::unique_ptr<TrainedModel> fit_forest(const RegressorSpec&, const Matrix&,
                                                  const Matrix&, const Mask*);
};

std::unique_ptr<TrainedModel> fit_forest(const RegressorSpec& spec, const Matrix& Xs,
                                         const Matrix& Y, const Mask* mask) {
  auto model = std::make_unique<ForestModel>();
  const int n_targets = static_cast<int>(Y.cols());
  const int n_estimators = static_cast<int>(spec.get("estimators"));
  TreeConfig config;
  config.max_depth = static_cast<int>(spec.get("max_depth"));
  config.min_samples_leaf = static_cast<int>(spec.get("min_samples_leaf"));
  config.max_features =
      static_cast<int>(std::ceil(static_cast<double>(Xs.cols()) / 3.0));

  model->per_target.resize(n_targets);
  for (int t = 0; t < n_targets; ++t) {
    std::vector<int> rows;
    for (Eigen::Index i = 0; i < Xs.rows(); ++i)
      if (!mask || (*mask)(i, t)) rows.push_back(static_cast<int>(i));
    auto& trees = model->per_target[t];
    trees.resize(n_estimators);
    const Vector y = Y.col(t);
    // One RNG stream per (target, tree); parallel order cannot change results.
    parallel_for(n_estimators, [&, t](std::size_t e) {
      Rng rng(derive_seed(spec.seed, static_cast<std::uint64_t>(t) * n_estimators + e));
      std::vector<int> boot(rows.size());
      for (std::size_t i = 0; i < rows.size(); ++i)
        boot[i] = rows[rng.uniform_index(rows.size())];
      trees[e].fit(Xs, y, boot, config, &rng);
    });
  }
  return model;
}

struct GbtTarget {
  double base = 0.0;
  std::vector<RegressionTree> trees;
};

class GbtModel final : public TrainedModel {
 public:
  std::vector<GbtTarget> per_target;
  double learning_rate = 0.1;

 protected:
  Matrix predict_scaled(const Matrix& Xs) const override {
    Matrix out(Xs.rows(), static_cast<Eigen::Index>(per_target.size()));
    for (std::size_t t = 0; t < per_target.size(); ++t) {
      Vector acc = Vector::Constant(Xs.rows(), per_target[t].base);
      for (const auto& tree : per_target[t].trees)
        acc += learning_rate * tree.predict(Xs);
      out.col(static_cast<Eigen::Index>(t)) = acc;
    }
    return out;
  }

  nlohmann::json params_json() const override {
    json targets = json::array();
    for (const auto& gt : per_target)
      targets.push_back({{"base", gt.base}, {"trees", trees_to_json(gt.trees)}});
    return {{"learning_rate", learning_rate}, {"targets", std::move(targets)}};
  }

  friend std::unique_ptr<TrainedModel> TrainedModel::from_json(const json&);
  friend std::unique_ptr<TrainedModel> fit_gbt(const RegressorSpec&, const Matrix&,
                                               const Matrix&, const Mask*);
};

std::unique_ptr<TrainedModel> fit_gbt(const RegressorSpec& spec, const Matrix& Xs,
                                      const Matrix& Y, const Mask* mask) {
  auto model = std::make_unique<GbtModel>();
  model->learning_rate = spec.get("learning_rate");
  const int n_estimators = static_cast<int>(spec.get("estimators"));
  TreeConfig config;
  config.max_depth = static_cast<int>(spec.get("max_depth"));
  config.max_features = 0;  // boosting stages see every feature

  model->per_target.resize(Y.cols());
  parallel_for(static_cast<std::size_t>(Y.cols()), [&](std::size_t t) {
    std::vector<int> rows;
    for (Eigen::Index i = 0; i < Xs.rows(); ++i)
      if (!mask || (*mask)(i, static_cast<Eigen::Index>(t)))
        rows.push_back(static_cast<int>(i));
    GbtTarget& gt = model->per_target[t];
    double base = 0.0;
    for (int i : rows) base += Y(i, t);
    gt.base = base / static_cast<double>(rows.size());

    Vector residual(Xs.rows());
    for (int i : rows) residual(i) = Y(i, t) - gt.base;
    gt.trees.resize(n_estimators);
    for (int e = 0; e < n_estimators; ++e) {
      gt.trees[e].fit(Xs, residual, rows, config, nullptr);
      for (int i : rows)
        residual(i) -= model->learning_rate * gt.trees[e].predict_one(Xs.row(i));
    }
  });
  return model;
}

}  // namespace

std::unique_ptr<TrainedModel> fit(const RegressorSpec& spec, const Matrix& X,
                                  const Matrix& Y, const Mask* mask,
                                  std::vector<std::string> feature_names,
                                  std::vector<std::string> target_names) {
  const RegressorSpec known = RegressorSpec::defaults(spec.family);
  for (const auto& [name, value] : spec.params)
    if (!known.params.count(name))
      throw ConfigError("fit: unknown hyperparameter '" + name + "' for family " +
                        family_name(spec.family));
  if (X.rows() != Y.rows()) throw ShapeError("fit: X and Y row counts differ");
  if (X.rows() < 2) throw DataError("fit: need at least 2 rows");
  if (mask && (mask->rows() != Y.rows() || mask->cols() != Y.cols()))
    throw ShapeError("fit: mask shape does not match Y");
  if (!X.allFinite()) throw DataError("fit: non-finite feature values");
  for (Eigen::Index j = 0; j < Y.cols(); ++j) {
    Eigen::Index observed = 0;
    for (Eigen::Index i = 0; i < Y.rows(); ++i) {
      if (mask && !(*mask)(i, j)) continue;
      if (!std::isfinite(Y(i, j)))
        throw DataError("fit: non-finite target value in column " + std::to_string(j));
      ++observed;
    }
    if (observed < 2)
      throw DataError("fit: target column " + std::to_string(j) +
                      " has fewer than 2 observed rows");
  }
  bool two_distinct = false;
  for (Eigen::Index i = 1; i < X.rows() && !two_distinct; ++i)
    two_distinct = (X.row(i) != X.row(0));
  if (!two_distinct) throw DataError("fit: all feature rows identical");

  if (feature_names.empty()) feature_names = default_names("x", X.cols());
  if (target_names.empty()) target_names = default_names("y", Y.cols());
  if (feature_names.size() != static_cast<std::size_t>(X.cols()) ||
      target_names.size() != static_cast<std::size_t>(Y.cols()))
    throw ShapeError("fit: name counts do not match matrix shapes");

  const data::ScalerParams input_scaler = data::fit_scaler(X, feature_names);
  const Matrix Xs = input_scaler.apply(X);

  std::unique_ptr<TrainedModel> model;
  switch (spec.family) {
    case Family::kMlp: model = fit_mlp(spec, Xs, Y, mask); break;
    case Family::kRandomForest: model = fit_forest(spec, Xs, Y, mask); break;
    case Family::kGbt: model = fit_gbt(spec, Xs, Y, mask); break;
  }
  model->spec_ = spec;
  model->feature_names_ = std::move(feature_names);
  model->target_names_ = std::move(target_names);
  model->input_scaler_ = input_scaler;
  return model;
}

json TrainedModel::to_json() const {
  json spec_params = json::object();
  for (const auto& [k, v] : spec_.params) spec_params[k] = v;
  return {{"family", family_name(spec_.family)},
          {"seed", spec_.seed},
          {"hyperparameters", std::move(spec_params)},
          {"feature_names", feature_names_},
          {"target_names", target_names_},
          {"input_scaler", scaler_to_json(input_scaler_)},
          {"parameters", params_json()},
          {"training_log", training_log_}};
}

std::unique_ptr<TrainedModel> TrainedModel::from_json(const json& j) {
  RegressorSpec spec;
  spec.family = family_from_name(j.at("family").get<std::string>());
  spec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [k, v] : j.at("hyperparameters").items())
    spec.params[k] = v.get<double>();
  const auto feature_names = j.at("feature_names").get<std::vector<std::string>>();
  const auto target_names = j.at("target_names").get<std::vector<std::string>>();
  const json& params = j.at("parameters");

  std::unique_ptr<TrainedModel> model;
  switch (spec.family) {
    case Family::kMlp: {
      auto m = std::make_unique<MlpModel>();
      m->arch.n_in = static_cast<int>(feature_names.size());
      m->arch.n_out = static_cast<int>(target_names.size());
      m->arch.hidden_layers = static_cast<int>(spec.get("hidden_layers"));
      m->arch.neurons = static_cast<int>(spec.get("neurons"));
      for (const json& layer : params.at("layers")) {
        const json& wj = layer.at("weights");
        Matrix W(wj.size(), wj[0].size());
        for (Eigen::Index r = 0; r < W.rows(); ++r)
          for (Eigen::Index c = 0; c < W.cols(); ++c)
            W(r, c) = wj[r][c].get<double>();
        Vector b(layer.at("bias").size());
        for (Eigen::Index r = 0; r < b.size(); ++r)
          b(r) = layer.at("bias")[r].get<double>();
        m->weights.W.push_back(std::move(W));
        m->weights.b.push_back(std::move(b));
      }
      const json& mean = params.at("target_mean");
      const json& sd = params.at("target_std");
      m->target_scaler.mean.resize(mean.size());
      m->target_scaler.sd.resize(sd.size());
      for (std::size_t j = 0; j < mean.size(); ++j) {
        m->target_scaler.mean(j) = mean[j].get<double>();
        m->target_scaler.sd(j) = sd[j].get<double>();
      }
      model = std::move(m);
      break;
    }
    case Family::kRandomForest: {
      auto m = std::make_unique<ForestModel>();
      for (const json& t : params.at("targets"))
        m->per_target.push_back(trees_from_json(t.at("trees")));
      model = std::move(m);
      break;
    }
    case Family::kGbt: {
      auto m = std::make_unique<GbtModel>();
      m->learning_rate = params.at("learning_rate").get<double>();
      for (const json& t : params.at("targets")) {
        GbtTarget gt;
        gt.base = t.at("base").get<double>();
        gt.trees = trees_from_json(t.at("trees"));
        m->per_target.push_back(std::move(gt));
      }
      model = std::move(m);
      break;
    }
  }
  model->spec_ = std::move(spec);
  model->feature_names_ = feature_names;
  model->target_names_ = target_names;
  model->input_scaler_ = scaler_from_json(j.at("input_scaler"), feature_names);
  model->training_log_ = j.at("training_log").get<std::vector<std::string>>();
  return model;
}

void TrainedModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out << to_json().dump(1) << '\n';
}

std::unique_ptr<TrainedModel> TrainedModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  json j;
  in >> j;
  return from_json(j);
}

GridSearchResult grid_search(Family family, const Grid& grid, const Matrix& X,
                             const Matrix& Y, int k, std::uint64_t seed,
                             const Mask* mask) {
  if (grid.empty()) throw SearchError("grid_search: empty grid");
  const RegressorSpec known = RegressorSpec::defaults(family);
  for (const auto& [name, values] : grid) {
    if (values.empty())
      throw SearchError("grid_search: no values for parameter '" + name + "'");
    if (!known.params.count(name))
      throw ConfigError("grid_search: unknown hyperparameter '" + name +
                        "' for family " + family_name(family));
  }
  if (k < 2) throw ConfigError("grid_search: k must be >= 2");
  if (X.rows() < k) throw SizeError("grid_search: fewer rows than folds");

  // Deterministic folds shared by every grid point.
  std::vector<int> order(X.rows());
  std::iota(order.begin(), order.end(), 0);
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

  std::size_t n_points = 1;
  for (const auto& [name, values] : grid) n_points *= values.size();

  GridSearchResult result;
  result.table.resize(n_points);
  bool any_feasible = false;
  double best_rmse = 0.0;
  std::size_t best_index = 0;

  for (std::size_t p = 0; p < n_points; ++p) {
    // Odometer over grid axes, last axis fastest.
    GridPoint& point = result.table[p];
    std::size_t rem = p;
    for (std::size_t axis = grid.size(); axis-- > 0;) {
      const auto& [name, values] = grid[axis];
      point.params[name] = values[rem % values.size()];
      rem /= values.size();
    }
    RegressorSpec spec = RegressorSpec::defaults(family);
    spec.seed = seed;
    for (const auto& [name, value] : point.params) spec.params[name] = value;

    double rmse_sum = 0.0;
    int fold_count = 0;
    try {
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
        const auto model = fit(spec, Xtr, Ytr, &mtr);
        Matrix Xte(folds[f].size(), X.cols());
        for (std::size_t i = 0; i < folds[f].size(); ++i)
          Xte.row(i) = X.row(folds[f][i]);
        const Matrix pred = model->predict(Xte);
        double target_rmse_sum = 0.0;
        for (Eigen::Index j = 0; j < Y.cols(); ++j) {
          double se = 0.0;
          int n_obs = 0;
          for (std::size_t i = 0; i < folds[f].size(); ++i) {
            const int row = folds[f][i];
            if (mask && !(*mask)(row, j)) continue;
            const double r = Y(row, j) - pred(i, j);
            se += r * r;
            ++n_obs;
          }
          if (n_obs == 0) throw DataError("fold has no observed cells for a target");
          target_rmse_sum += std::sqrt(se / n_obs);
        }
        rmse_sum += target_rmse_sum / static_cast<double>(Y.cols());
        ++fold_count;
      }
      point.mean_cv_rmse = rmse_sum / fold_count;
      point.feasible = true;
    } catch (const Error& e) {
      point.feasible = false;
      point.note = e.what();
      continue;
    }

    if (!any_feasible || point.mean_cv_rmse < best_rmse) {
      any_feasible = true;
      best_rmse = point.mean_cv_rmse;
      best_index = p;
    }
  }

  if (!any_feasible) throw SearchError("grid_search: every grid point failed");
  RegressorSpec best = RegressorSpec::defaults(family);
  best.seed = seed;
  for (const auto& [name, value] : result.table[best_index].params)
    best.params[name] = value;
  result.best = best;
  return result;
}

}  // namespace jetsurro::ml
