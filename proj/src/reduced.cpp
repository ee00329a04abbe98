#include "jetsurro/reduced.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "jetsurro/errors.hpp"

namespace jetsurro::reduced {

ReducedTable compress(const data::Dataset& ds) {
  ReducedTable table;
  table.feature_names = {"theta", "Fr", "d"};
  table.X.resize(ds.rows.size(), 3);
  table.Y.resize(ds.rows.size(), 5);
  table.mask.resize(ds.rows.size(), 5);
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    const data::Row& r = ds.rows[i];
    const double g0p = phys::reduced_gravity(r.c.rho_b, r.c.rho_a);
    table.X(i, 0) = r.c.theta;
    table.X(i, 1) = phys::froude(r.c.U0, g0p, r.c.d);
    table.X(i, 2) = r.c.d;
    for (std::size_t j = 0; j < 5; ++j) {
      table.Y(i, j) = r.present[j] ? r.y[j] : std::numeric_limits<double>::quiet_NaN();
      table.mask(i, j) = r.present[j];
    }
  }
  return table;
}

ComparisonReport reduced_fit_eval(const data::Dataset& ds, std::uint64_t seed) {
  if (ds.rows.size() < 100)
    throw SizeError("reduced_fit_eval: need at least 100 rows");

  const auto [train, val] = data::split(ds, 0.9, seed);
  const ReducedTable red_train = compress(train);
  const ReducedTable red_val = compress(val);

  const Matrix Xf_train = train.features();
  const Matrix Yf_train = train.targets();
  const Mask mask_train = train.target_mask();
  const Matrix Xf_val = val.features();
  const Matrix Yf_val = val.targets();
  const Mask mask_val = val.target_mask();

  std::vector<std::string> feature_names, target_names;
  for (const char* n : data::kFeatureNames) feature_names.emplace_back(n);
  for (const char* n : data::kTargetNames) target_names.emplace_back(n);

  ml::RegressorSpec full_spec = ml::RegressorSpec::defaults(ml::Family::kMlp);
  full_spec.seed = seed;
  ml::RegressorSpec red_spec = full_spec.with("neurons", 20.0);

  // Identical fold assignment for both representations: folds are built from
  // the full-feature canonical order and reused.
  const auto folds =
      eval::make_folds(eval::canonical_order(Xf_train, Yf_train), 5, seed);

  ComparisonReport report;
  report.full.cv =
      eval::kfold_xy(full_spec, Xf_train, Yf_train, &mask_train, folds, target_names);
  report.reduced.cv = eval::kfold_xy(red_spec, red_train.X, red_train.Y,
                                     &red_train.mask, folds, target_names);

  const auto full_model =
      ml::fit(full_spec, Xf_train, Yf_train, &mask_train, feature_names, target_names);
  report.full.validation = eval::validate(*full_model, Xf_val, Yf_val, &mask_val);

  const auto red_model = ml::fit(red_spec, red_train.X, red_train.Y, &red_train.mask,
                                 red_train.feature_names, target_names);
  report.reduced.validation =
      eval::validate(*red_model, red_val.X, red_val.Y, &red_val.mask);

  return report;
}

DfrSeries dfr_dependence(const explain::Attribution& attr, int target) {
  const auto index_of = [&](const std::string& name) {
    const auto it =
        std::find(attr.feature_names.begin(), attr.feature_names.end(), name);
    if (it == attr.feature_names.end())
      throw NameError("dfr_dependence: attribution lacks feature '" + name + "'");
    return static_cast<Eigen::Index>(it - attr.feature_names.begin());
  };
  const Eigen::Index j_fr = index_of("Fr");
  const Eigen::Index j_d = index_of("d");

  DfrSeries series;
  series.theta = explain::dependence_data(attr, "theta", target);
  for (Eigen::Index i = 0; i < attr.feature_values.rows(); ++i) {
    const double dfr = attr.feature_values(i, j_d) * attr.feature_values(i, j_fr);
    const double phi =
        attr.phi[target](i, j_d) + attr.phi[target](i, j_fr);
    series.d_fr.emplace_back(dfr, phi);
  }
  std::stable_sort(series.d_fr.begin(), series.d_fr.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  return series;
}

}  // namespace jetsurro::reduced
