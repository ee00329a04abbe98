// Command-line front end: generate / train / explain / report.
//
// Every command is a pure function of (config, input files, seed); reruns
// produce byte-identical artifacts. Exit codes: 0 success, 1 internal error,
// 2 invalid input or config, 3 empty selection.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

#include "jetsurro/dataset.hpp"
#include "jetsurro/errors.hpp"
#include "jetsurro/eval.hpp"
#include "jetsurro/explain.hpp"
#include "jetsurro/jetmodel.hpp"
#include "jetsurro/models.hpp"
#include "jetsurro/numfmt.hpp"
#include "jetsurro/parallel.hpp"
#include "jetsurro/report.hpp"
#include "jetsurro/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace jetsurro;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path.string());
  out << text;
}

ordered_json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  try {
    return ordered_json::parse(in);
  } catch (const std::exception& e) {
    throw ConfigError("bad JSON in " + path + ": " + e.what());
  }
}

void apply_threads(int threads) {
  if (threads <= 0) {
    if (const char* env = std::getenv("JETSURRO_THREADS")) threads = std::atoi(env);
  }
  if (threads > 0) max_threads().store(static_cast<unsigned>(threads));
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateConfig {
  std::size_t n = 500;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> noise_seed;
  double noise_sigma = 0.02;
  data::Ranges ranges = data::Ranges::defaults();
  plume::IntegratorConfig oracle;
};

GenerateConfig parse_generate_config(const ordered_json& j) {
  GenerateConfig cfg;
  cfg.n = j.value("n", static_cast<std::uint64_t>(500));
  cfg.seed = j.value("seed", static_cast<std::uint64_t>(0));
  if (j.contains("noise")) {
    const auto& nj = j.at("noise");
    if (nj.value("enabled", true) && nj.contains("seed"))
      cfg.noise_seed = nj.at("seed").get<std::uint64_t>();
    cfg.noise_sigma = nj.value("sigma", 0.02);
  }
  if (j.contains("ranges")) {
    for (std::size_t f = 0; f < data::kFeatureNames.size(); ++f) {
      const std::string name = data::kFeatureNames[f];
      if (j.at("ranges").contains(name)) {
        const auto& pair = j.at("ranges").at(name);
        cfg.ranges.bounds[f] = {pair.at(0).get<double>(), pair.at(1).get<double>()};
      }
    }
  }
  if (j.contains("envelope")) {
    const auto& ej = j.at("envelope");
    if (!ej.value("enabled", true)) {
      const data::Ranges open = data::Ranges::unbounded();
      cfg.ranges.fr_min = open.fr_min;
      cfg.ranges.fr_max = open.fr_max;
      cfg.ranges.d_fr_max = open.d_fr_max;
    } else {
      if (ej.contains("fr")) {
        cfg.ranges.fr_min = ej.at("fr").at(0).get<double>();
        cfg.ranges.fr_max = ej.at("fr").at(1).get<double>();
      }
      cfg.ranges.d_fr_max = ej.value("d_fr_max", cfg.ranges.d_fr_max);
    }
  }
  if (j.contains("oracle")) {
    const auto& oj = j.at("oracle");
    cfg.oracle.step_factor = oj.value("step_factor", 0.1);
    cfg.oracle.s_max_factor = oj.value("s_max_factor", 200.0);
    cfg.oracle.boundary_closures = oj.value("boundary_closures", true);
  }
  cfg.oracle.noise_sigma = cfg.noise_sigma;
  return cfg;
}

// Draws cases until exactly n oracle rows succeed. Noise streams key on the
// sampler draw index, so replacement draws cannot shift earlier rows.
data::Dataset generate_dataset(const GenerateConfig& cfg,
                               std::vector<std::string>* failure_log) {
  data::CaseSampler sampler(cfg.ranges, cfg.seed);
  data::Dataset ds;
  const std::size_t failure_budget =
      std::max<std::size_t>(5, (cfg.n + 19) / 20);  // 5% of n
  std::size_t failures = 0;
  std::uint64_t draw_index = 0;

  while (ds.rows.size() < cfg.n) {
    const std::size_t want = cfg.n - ds.rows.size();
    struct Slot {
      phys::JetCase c;
      std::uint64_t index = 0;
      bool ok = false;
      phys::JetGeometry g{};
      std::string reason;
    };
    std::vector<Slot> batch(want);
    for (auto& slot : batch) {
      slot.c = sampler.next();
      slot.index = draw_index++;
    }
    parallel_for(batch.size(), [&](std::size_t i) {
      try {
        std::optional<std::uint64_t> seed_i;
        if (cfg.noise_seed) seed_i = derive_seed(*cfg.noise_seed, batch[i].index);
        batch[i].g = plume::oracle(batch[i].c, seed_i, cfg.oracle);
        batch[i].ok = true;
      } catch (const Error& e) {
        batch[i].reason = e.what();
      }
    });
    for (auto& slot : batch) {
      if (slot.ok) {
        data::Row row;
        row.c = slot.c;
        row.y = {slot.g.x_m, slot.g.z_m, slot.g.z_t, slot.g.x_r, slot.g.x_i};
        ds.rows.push_back(row);
      } else {
        ++failures;
        if (failure_log)
          failure_log->push_back("case at draw " + std::to_string(slot.index) + ": " +
                                 slot.reason);
        if (failures > failure_budget)
          throw DataError("oracle failure budget exceeded (" +
                          std::to_string(failures) + " failures)");
      }
    }
  }
  return ds;
}

void print_summary_stats(const data::Dataset& ds, std::ostream& out) {
  out << "column,min,max,average,std_dev\n";
  if (ds.rows.empty()) return;
  const Matrix X = ds.features();
  const auto stats_line = [&](const std::string& name, const Vector& col) {
    const double mean = col.mean();
    double sd = 0.0;
    if (col.size() > 1)
      sd = std::sqrt((col.array() - mean).square().sum() /
                     static_cast<double>(col.size() - 1));
    out << name << ',' << fmt_double(col.minCoeff()) << ','
        << fmt_double(col.maxCoeff()) << ',' << fmt_double(mean) << ','
        << fmt_double(sd) << '\n';
  };
  for (std::size_t j = 0; j < 7; ++j) stats_line(data::kFeatureNames[j], X.col(j));
  for (std::size_t j = 0; j < 5; ++j) {
    std::vector<double> present;
    for (const auto& row : ds.rows)
      if (row.present[j]) present.push_back(row.y[j]);
    if (present.empty()) continue;
    stats_line(data::kTargetNames[j],
               Eigen::Map<const Vector>(present.data(), present.size()));
  }
}

int cmd_generate(const std::string& config_path, const std::string& out_path,
                 const std::string& centerline_dir, std::optional<std::uint64_t> seed,
                 const std::string& merge_path) {
  GenerateConfig cfg = parse_generate_config(
      config_path.empty() ? ordered_json::object() : read_json(config_path));
  if (seed) cfg.seed = *seed;

  std::vector<std::string> failure_log;
  data::Dataset ds;
  if (cfg.n > 0) ds = generate_dataset(cfg, &failure_log);
  for (const auto& line : failure_log) std::cerr << "note: " << line << '\n';

  if (!merge_path.empty()) {
    std::ifstream in(merge_path, std::ios::binary);
    if (!in) throw ConfigError("cannot open: " + merge_path);
    const auto records = data::read_external_csv(in);
    auto merged = data::merge_external(ds, records);
    for (const auto& [index, reason] : merged.rejected)
      std::cerr << "rejected external record " << index << ": " << reason << '\n';
    ds = std::move(merged.dataset);
  }

  data::write_csv_file(ds, out_path);
  print_summary_stats(ds, std::cout);

  if (!centerline_dir.empty()) {
    fs::create_directories(centerline_dir);
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
      if (ds.rows[i].prov != data::Provenance::kOracle) continue;
      const auto line = plume::integrate(ds.rows[i].c, cfg.oracle);
      char name[32];
      std::snprintf(name, sizeof(name), "case_%04zu.csv", i);
      std::ofstream out(fs::path(centerline_dir) / name, std::ios::binary);
      plume::write_centerline_csv(line, out);
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

ml::Grid parse_grid(const ordered_json& j) {
  ml::Grid grid;
  for (const auto& [key, values] : j.items()) {
    std::vector<double> axis;
    for (const auto& v : values) axis.push_back(v.get<double>());
    grid.emplace_back(key, std::move(axis));
  }
  return grid;
}

void write_predictions_csv(const fs::path& path, const ml::TrainedModel& model,
                           const data::Dataset& train, const data::Dataset& val) {
  std::ostringstream out;
  out << "target,split,observed,predicted\n";
  const auto emit = [&](const data::Dataset& part, const char* split) {
    if (part.rows.empty()) return;
    const Matrix P = model.predict(part.features());
    for (std::size_t i = 0; i < part.rows.size(); ++i)
      for (std::size_t j = 0; j < 5; ++j)
        if (part.rows[i].present[j])
          out << data::kTargetNames[j] << ',' << split << ','
              << fmt_double(part.rows[i].y[j]) << ','
              << fmt_double(P(static_cast<Eigen::Index>(i), j)) << '\n';
  };
  emit(train, "train");
  emit(val, "validation");
  write_text(path, out.str());
}

int cmd_train(const std::string& data_path, const std::string& family_name,
              const std::string& grid_path, const std::string& out_path,
              std::uint64_t seed, bool learning_curve) {
  const data::Dataset ds = data::read_csv_file(data_path);
  const ml::Family family = ml::family_from_name(family_name);
  const auto [train, val] = data::split(ds, 0.9, seed);

  ml::RegressorSpec spec = ml::RegressorSpec::defaults(family);
  spec.seed = seed;

  const fs::path out_file(out_path);
  const fs::path dir = out_file.has_parent_path() ? out_file.parent_path()
                                                  : fs::path(".");
  fs::create_directories(dir);

  if (!grid_path.empty()) {
    const ml::Grid grid = parse_grid(read_json(grid_path));
    const Matrix Xg = train.features();
    const Matrix Yg = train.targets();
    const Mask mg = train.target_mask();
    const auto search = ml::grid_search(family, grid, Xg, Yg, 5, seed, &mg);
    spec = search.best;
    std::ostringstream cv;
    cv << "point";
    for (const auto& [name, values] : grid) cv << ',' << name;
    cv << ",mean_cv_rmse,feasible\n";
    for (std::size_t p = 0; p < search.table.size(); ++p) {
      cv << p;
      for (const auto& [name, values] : grid)
        cv << ',' << fmt_double(search.table[p].params.at(name));
      cv << ','
         << (search.table[p].feasible ? fmt_double(search.table[p].mean_cv_rmse) : "")
         << ',' << (search.table[p].feasible ? "yes" : "no") << '\n';
    }
    write_text(dir / "grid_cv.csv", cv.str());
  }

  eval::EvalReport report;
  report.cv = eval::kfold(spec, train, 5, seed);

  std::vector<std::string> feature_names, target_names;
  for (const char* n : data::kFeatureNames) feature_names.emplace_back(n);
  for (const char* n : data::kTargetNames) target_names.emplace_back(n);
  const Matrix Xtr = train.features();
  const Matrix Ytr = train.targets();
  const Mask mtr = train.target_mask();
  const auto model = ml::fit(spec, Xtr, Ytr, &mtr, feature_names, target_names);

  const Matrix Xv = val.features();
  const Matrix Yv = val.targets();
  const Mask mv = val.target_mask();
  report.validation = eval::validate(*model, Xv, Yv, &mv);

  model->save(out_path);
  {
    std::ostringstream s;
    report.write_kfold_csv(s);
    write_text(dir / "eval_kfold.csv", s.str());
  }
  {
    std::ostringstream s;
    report.write_validation_csv(s);
    write_text(dir / "eval_validation.csv", s.str());
  }
  write_text(dir / "eval.json", report.to_json().dump(1) + "\n");
  write_predictions_csv(dir / "predictions.csv", *model, train, val);

  if (learning_curve) {
    const std::size_t k = 5;
    const auto max_size =
        static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(ds.rows.size())));
    std::vector<std::size_t> sizes;
    for (int i = 1; i <= 9; ++i) {
      const auto s = static_cast<std::size_t>(
          std::llround(static_cast<double>(i) / 9.0 * static_cast<double>(max_size)));
      if (s >= 2 * k && (sizes.empty() || s > sizes.back())) sizes.push_back(s);
    }
    const auto curve = eval::learning_curve(spec, ds, sizes, 5, seed);
    std::ostringstream s;
    curve.write_csv(s);
    write_text(dir / "learning_curve.csv", s.str());
    if (curve.plateau_size)
      std::cout << "learning curve plateau at size " << *curve.plateau_size << '\n';
  }

  std::cout << "validation R2 per target:";
  for (double r : report.validation.r2_per_target) std::cout << ' ' << fmt_double(r);
  std::cout << "\nvalidation average R2 " << fmt_double(report.validation.r2_avg)
            << " RMSE " << fmt_double(report.validation.rmse_avg) << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// explain
// ---------------------------------------------------------------------------

int cmd_explain(const std::string& model_path, const std::string& data_path,
                int instance, const std::string& regime, const std::string& out_dir,
                int max_instances, std::uint64_t seed, int background_size) {
  const auto model = ml::TrainedModel::load(model_path);
  const data::Dataset ds = data::read_csv_file(data_path);
  if (ds.rows.empty()) throw ConfigError("explain: dataset is empty");
  const Matrix X = ds.features();

  // Fixed-seed background subsample of the provided (training) data.
  Matrix background;
  {
    std::vector<int> idx(static_cast<int>(ds.rows.size()));
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(derive_seed(seed, 0xbac9));
    rng.shuffle(idx);
    const auto rows = std::min<std::size_t>(background_size, idx.size());
    background.resize(rows, X.cols());
    for (std::size_t i = 0; i < rows; ++i) background.row(i) = X.row(idx[i]);
  }

  // Explained instances: deterministic subsample; a requested instance or
  // regime selection always joins the set.
  std::vector<int> explained;
  {
    std::vector<int> idx(static_cast<int>(ds.rows.size()));
    std::iota(idx.begin(), idx.end(), 0);
    if (max_instances > 0 && idx.size() > static_cast<std::size_t>(max_instances)) {
      Rng rng(derive_seed(seed, 0x1257));
      rng.shuffle(idx);
      idx.resize(max_instances);
      std::sort(idx.begin(), idx.end());
    }
    explained = idx;
  }

  std::vector<int> waterfall_rows;
  if (instance >= 0) {
    if (instance >= static_cast<int>(ds.rows.size()))
      throw ConfigError("explain: --instance out of range");
    waterfall_rows.push_back(instance);
  }
  if (!regime.empty()) {
    if (regime != "coanda" && regime != "shallow")
      throw ConfigError("explain: --regime must be coanda or shallow");
    for (std::size_t i = 0; i < ds.rows.size(); ++i) {
      const auto flags = explain::regime_flags(ds.rows[i].c);
      if ((regime == "coanda" && flags.coanda) ||
          (regime == "shallow" && flags.shallow))
        waterfall_rows.push_back(static_cast<int>(i));
    }
    if (waterfall_rows.empty())
      throw EmptySelectionError("explain: no instances match regime '" + regime + "'");
    if (waterfall_rows.size() > 3) waterfall_rows.resize(3);
  }
  for (int row : waterfall_rows)
    if (std::find(explained.begin(), explained.end(), row) == explained.end())
      explained.push_back(row);

  Matrix instances(static_cast<Eigen::Index>(explained.size()), X.cols());
  for (std::size_t i = 0; i < explained.size(); ++i)
    instances.row(static_cast<Eigen::Index>(i)) = X.row(explained[i]);

  explain::KernelShapConfig shap_cfg;
  shap_cfg.seed = seed;
  const auto attr = explain::kernel_shap(*model, instances, background, shap_cfg);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  const auto& fnames = attr.feature_names;
  const auto& tnames = attr.target_names;

  // Attribution export per target.
  for (std::size_t t = 0; t < tnames.size(); ++t) {
    std::ostringstream out;
    out << "instance,base";
    for (const auto& f : fnames) out << ",phi_" << f;
    out << ",prediction\n";
    for (std::size_t i = 0; i < explained.size(); ++i) {
      out << explained[i] << ',' << fmt_double(attr.base(t));
      for (std::size_t j = 0; j < fnames.size(); ++j)
        out << ',' << fmt_double(attr.phi[t](static_cast<Eigen::Index>(i), j));
      out << ',' << fmt_double(attr.predictions(static_cast<Eigen::Index>(i), t))
          << '\n';
    }
    write_text(dir / ("attribution_" + tnames[t] + ".csv"), out.str());
  }

  // Bar: one file covering all targets, ranked.
  {
    const auto bars = explain::bar_data(attr);
    std::ostringstream out;
    out << "target,feature,mean_abs_phi\n";
    for (std::size_t t = 0; t < tnames.size(); ++t)
      for (const auto& entry : bars[t])
        out << tnames[t] << ',' << entry.feature << ','
            << fmt_double(entry.mean_abs_phi) << '\n';
    write_text(dir / "bar.csv", out.str());
  }

  // Summary: per target, every (feature, raw, scaled raw, phi) point.
  const data::ScalerParams color_scaler = data::fit_scaler(instances, fnames);
  const Matrix scaled = color_scaler.apply(instances);
  for (std::size_t t = 0; t < tnames.size(); ++t) {
    std::ostringstream out;
    out << "feature,raw,scaled,phi\n";
    for (std::size_t j = 0; j < fnames.size(); ++j) {
      const auto points =
          explain::summary_data(attr, static_cast<int>(t), static_cast<int>(j));
      for (std::size_t i = 0; i < points.size(); ++i)
        out << fnames[j] << ',' << fmt_double(points[i].raw) << ','
            << fmt_double(scaled(static_cast<Eigen::Index>(i), j)) << ','
            << fmt_double(points[i].phi) << '\n';
    }
    write_text(dir / ("summary_" + tnames[t] + ".csv"), out.str());
  }

  // Dependence series for every feature and target.
  for (std::size_t t = 0; t < tnames.size(); ++t)
    for (const auto& f : fnames) {
      const auto series = explain::dependence_data(attr, f, static_cast<int>(t));
      std::ostringstream out;
      out << "raw,phi\n";
      for (const auto& [raw, phi] : series)
        out << fmt_double(raw) << ',' << fmt_double(phi) << '\n';
      write_text(dir / ("dependence_" + tnames[t] + "_" + f + ".csv"), out.str());
    }

  // Waterfalls for the requested rows.
  for (int row : waterfall_rows) {
    const auto it = std::find(explained.begin(), explained.end(), row);
    const int local = static_cast<int>(it - explained.begin());
    for (std::size_t t = 0; t < tnames.size(); ++t) {
      const auto steps = explain::waterfall_data(attr, local, static_cast<int>(t));
      std::ostringstream out;
      out << "label,delta,running\n";
      for (const auto& s : steps)
        out << s.label << ',' << fmt_double(s.delta) << ',' << fmt_double(s.running)
            << '\n';
      write_text(
          dir / ("waterfall_" + tnames[t] + "_i" + std::to_string(row) + ".csv"),
          out.str());
    }
  }

  ordered_json meta;
  meta["background_rows"] = static_cast<std::uint64_t>(attr.background_rows);
  meta["n_coalitions"] = attr.n_coalitions_used;
  meta["exact"] = attr.exact;
  meta["ridge_fallback"] = attr.ridge_fallback;
  meta["instances"] = explained;
  write_text(dir / "explain_meta.json", meta.dump(1) + "\n");

  std::cout << "explained " << explained.size() << " instances ("
            << (attr.exact ? "exact" : "sampling") << " mode, "
            << attr.n_coalitions_used << " coalitions)\n";
  return 0;
}

// ---------------------------------------------------------------------------

int dispatch(int argc, char** argv) {
  CLI::App app{"Surrogate pipeline for inclined dense jet geometry"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (results unaffected)");

  auto* gen = app.add_subcommand("generate", "sample cases and run the jet oracle");
  std::string gen_config, gen_out, gen_centerlines, gen_merge;
  std::uint64_t gen_seed = 0;
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "override config seed");
  gen->add_option("--config", gen_config, "JSON config (ranges, n, seeds)");
  gen->add_option("--out", gen_out, "output dataset CSV")->required();
  gen->add_option("--centerlines", gen_centerlines, "per-case centerline dump dir");
  gen->add_option("--merge", gen_merge, "external records CSV to append");

  auto* train = app.add_subcommand("train", "split, fit and evaluate a model");
  std::string train_data, train_family = "mlp", train_grid, train_out;
  std::uint64_t train_seed = 0;
  bool train_curve = false;
  train->add_option("--data", train_data, "dataset CSV")->required();
  train->add_option("--family", train_family, "mlp | rf | gbt");
  train->add_option("--grid", train_grid, "hyperparameter grid JSON");
  train->add_option("--out", train_out, "output model JSON")->required();
  train->add_option("--seed", train_seed, "split/fold/training seed");
  train->add_flag("--learning-curve", train_curve, "also compute the learning curve");

  auto* expl = app.add_subcommand("explain", "SHAP attribution products");
  std::string expl_model, expl_data, expl_regime, expl_out;
  int expl_instance = -1, expl_max = 200, expl_background = 100;
  std::uint64_t expl_seed = 0;
  expl->add_option("--model", expl_model, "model JSON")->required();
  expl->add_option("--data", expl_data, "dataset CSV")->required();
  expl->add_option("--instance", expl_instance, "waterfall for this row index");
  expl->add_option("--regime", expl_regime, "coanda | shallow waterfall selection");
  expl->add_option("--out", expl_out, "output directory")->required();
  expl->add_option("--max-instances", expl_max, "explained subsample cap (0 = all)");
  expl->add_option("--background", expl_background, "background subsample size");
  expl->add_option("--seed", expl_seed, "subsample seed");

  auto* rep = app.add_subcommand("report", "render tables and SVG plots");
  std::string rep_in, rep_out;
  rep->add_option("--in", rep_in, "directory of CSV artifacts")->required();
  rep->add_option("--out", rep_out, "output report (.html or .md)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  apply_threads(threads);

  if (gen->parsed())
    return cmd_generate(gen_config, gen_out, gen_centerlines,
                        gen_seed_opt->count() > 0
                            ? std::optional<std::uint64_t>(gen_seed)
                            : std::nullopt,
                        gen_merge);
  if (train->parsed())
    return cmd_train(train_data, train_family, train_grid, train_out, train_seed,
                     train_curve);
  if (expl->parsed())
    return cmd_explain(expl_model, expl_data, expl_instance, expl_regime, expl_out,
                       expl_max, expl_seed, expl_background);
  if (rep->parsed()) {
    const std::string format = rep_out.ends_with(".md") ? "md" : "html";
    std::vector<std::string> missing;
    const std::string doc = report::render(rep_in, format, &missing);
    write_text(rep_out, doc);
    for (const auto& m : missing) std::cerr << "missing input: " << m << '\n';
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const EmptySelectionError& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 3}}).dump() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 2}}).dump() << '\n';
    return 2;
  } catch (const SamplingError& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 2}}).dump() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 2}}).dump() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 2}}).dump() << '\n';
    return 2;
  } catch (const SizeError& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 2}}).dump() << '\n';
    return 2;
  } catch (const ShapeError& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 2}}).dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json({{"error", e.what()}, {"exit", 1}}).dump() << '\n';
    return 1;
  }
}
