#include "jetsurro/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "jetsurro/errors.hpp"
#include "jetsurro/numfmt.hpp"
#include "jetsurro/parallel.hpp"

namespace jetsurro::data {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double feature_of(const phys::JetCase& c, std::size_t j) {
  switch (j) {
    case 0: return c.theta;
    case 1: return c.h_p;
    case 2: return c.H;
    case 3: return c.d;
    case 4: return c.U0;
    case 5: return c.rho_b;
    case 6: return c.rho_a;
    default: throw NameError("feature index out of range");
  }
}
}  // namespace

Matrix Dataset::features() const {
  Matrix X(rows.size(), 7);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < 7; ++j) X(i, j) = feature_of(rows[i].c, j);
  return X;
}

Matrix Dataset::targets() const {
  Matrix Y(rows.size(), 5);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < 5; ++j)
      Y(i, j) = rows[i].present[j] ? rows[i].y[j] : kNaN;
  return Y;
}

Mask Dataset::target_mask() const {
  Mask m(rows.size(), 5);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < 5; ++j) m(i, j) = rows[i].present[j];
  return m;
}

bool Dataset::contains(const phys::JetCase& c) const {
  return std::any_of(rows.begin(), rows.end(),
                     [&](const Row& r) { return r.c == c; });
}

Ranges Ranges::defaults() {
  Ranges r;
  r.bounds = {{{5.0, 80.0},      // theta, degrees
               {0.02, 5.89},     // h_p, m
               {0.11, 9.8},      // H, m
               {0.002, 0.39},    // d, m
               {0.059, 4.96},    // U0, m/s
               {1000.0, 1059.0},  // rho_b, kg/m^3
               {980.0, 1030.0}}};  // rho_a, kg/m^3
  return r;
}

Ranges Ranges::unbounded() {
  Ranges r = defaults();
  r.fr_min = 0.0;
  r.fr_max = std::numeric_limits<double>::infinity();
  r.d_fr_max = std::numeric_limits<double>::infinity();
  return r;
}

CaseSampler::CaseSampler(const Ranges& ranges, std::uint64_t seed)
    : ranges_(ranges), rng_(seed) {
  for (std::size_t j = 0; j < 7; ++j) {
    if (!(ranges_.bounds[j].first < ranges_.bounds[j].second))
      throw ConfigError(std::string("invalid range for ") + kFeatureNames[j] +
                        ": min must be below max");
  }
}

phys::JetCase CaseSampler::next() {
  constexpr std::uint64_t kMaxDraws = 1000000;
  while (draws_ < kMaxDraws) {
    ++draws_;
    phys::JetCase c;
    c.theta = rng_.uniform(ranges_.bounds[0].first, ranges_.bounds[0].second);
    c.h_p = rng_.uniform(ranges_.bounds[1].first, ranges_.bounds[1].second);
    c.H = rng_.uniform(ranges_.bounds[2].first, ranges_.bounds[2].second);
    c.d = rng_.uniform(ranges_.bounds[3].first, ranges_.bounds[3].second);
    c.U0 = rng_.uniform(ranges_.bounds[4].first, ranges_.bounds[4].second);
    c.rho_b = rng_.uniform(ranges_.bounds[5].first, ranges_.bounds[5].second);
    c.rho_a = rng_.uniform(ranges_.bounds[6].first, ranges_.bounds[6].second);
    if (!(c.rho_b > c.rho_a)) continue;
    if (!(c.H >= 2.0 * c.h_p)) continue;
    const double g0p = phys::reduced_gravity(c.rho_b, c.rho_a);
    const double fr = phys::froude(c.U0, g0p, c.d);
    if (fr < ranges_.fr_min || fr > ranges_.fr_max) continue;
    if (c.d * fr > ranges_.d_fr_max) continue;
    const auto pos = std::lower_bound(accepted_.begin(), accepted_.end(), c);
    if (pos != accepted_.end() && *pos == c) continue;
    accepted_.insert(pos, c);
    return c;
  }
  throw SamplingError("case sampling exhausted after 1e6 draws (infeasible ranges?)");
}

std::vector<phys::JetCase> sample_cases(std::size_t n, const Ranges& ranges,
                                        std::uint64_t seed) {
  CaseSampler sampler(ranges, seed);
  std::vector<phys::JetCase> cases;
  cases.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cases.push_back(sampler.next());
  return cases;
}

GenerationOutcome generate(const std::vector<phys::JetCase>& cases,
                           std::optional<std::uint64_t> noise_seed,
                           const plume::IntegratorConfig& config) {
  struct Slot {
    bool ok = false;
    phys::JetGeometry g{};
    std::string reason;
  };
  std::vector<Slot> slots(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    try {
      std::optional<std::uint64_t> seed_i;
      if (noise_seed) seed_i = derive_seed(*noise_seed, i);
      slots[i].g = plume::oracle(cases[i], seed_i, config);
      slots[i].ok = true;
    } catch (const Error& e) {
      slots[i].reason = e.what();
    }
  });

  GenerationOutcome out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (slots[i].ok) {
      Row r;
      r.c = cases[i];
      r.y = {slots[i].g.x_m, slots[i].g.z_m, slots[i].g.z_t, slots[i].g.x_r,
             slots[i].g.x_i};
      r.prov = Provenance::kOracle;
      out.dataset.rows.push_back(r);
    } else {
      out.failures.push_back({i, cases[i], slots[i].reason});
    }
  }
  if (!cases.empty() &&
      out.dataset.rows.size() * 20 < cases.size() * 19) {  // < 95% success
    std::ostringstream msg;
    msg << "oracle failed on " << out.failures.size() << " of " << cases.size()
        << " cases (budget is 5%); first failure: " << out.failures.front().reason;
    throw DataError(msg.str());
  }
  return out;
}

MergeOutcome merge_external(const Dataset& base,
                            const std::vector<ExternalRecord>& records) {
  MergeOutcome out;
  out.dataset = base;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const ExternalRecord& rec = records[i];
    try {
      rec.c.validate();
    } catch (const ValidationError& e) {
      out.rejected.emplace_back(i, e.what());
      continue;
    }
    if (std::none_of(rec.present.begin(), rec.present.end(),
                     [](bool p) { return p; })) {
      out.rejected.emplace_back(i, "record carries no target value");
      continue;
    }
    if (out.dataset.contains(rec.c)) {
      out.rejected.emplace_back(i, "duplicate JetCase");
      continue;
    }
    Row r;
    r.c = rec.c;
    r.y = rec.y;
    r.present = rec.present;
    r.prov = Provenance::kExternal;
    out.dataset.rows.push_back(r);
  }
  return out;
}

ScalerParams fit_scaler(const Matrix& X, const std::vector<std::string>& names) {
  if (X.rows() < 2) throw ShapeError("fit_scaler: need at least 2 rows");
  if (names.size() != static_cast<std::size_t>(X.cols()))
    throw ShapeError("fit_scaler: name count does not match columns");
  ScalerParams p;
  p.names = names;
  p.min_max.resize(names.size());
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    p.min_max[j] = {X.col(j).minCoeff(), X.col(j).maxCoeff()};
  return p;
}

Matrix ScalerParams::apply(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != min_max.size())
    throw ShapeError("scaler: column count mismatch");
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto [lo, hi] = min_max[j];
    if (hi == lo)
      out.col(j).setZero();
    else
      out.col(j) = (X.col(j).array() - lo) / (hi - lo);
  }
  return out;
}

Matrix ScalerParams::invert(const Matrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != min_max.size())
    throw ShapeError("scaler: column count mismatch");
  Matrix out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const auto [lo, hi] = min_max[j];
    out.col(j) = X.col(j).array() * (hi - lo) + lo;
  }
  return out;
}

Matrix pearson(const Matrix& X, const std::vector<std::string>& names) {
  if (X.rows() < 3) throw ShapeError("pearson: need at least 3 rows");
  const Eigen::Index n = X.cols();
  Matrix centered = X.rowwise() - X.colwise().mean();
  Vector norm(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    norm(j) = centered.col(j).norm();
    if (norm(j) == 0.0) {
      const std::string name =
          static_cast<std::size_t>(j) < names.size() ? names[j] : std::to_string(j);
      throw DomainError("pearson: correlation undefined for constant column '" +
                        name + "'");
    }
  }
  Matrix corr(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    corr(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double c = centered.col(i).dot(centered.col(j)) / (norm(i) * norm(j));
      corr(i, j) = c;
      corr(j, i) = c;
    }
  }
  return corr;
}

Matrix pearson_matrix(const Dataset& ds) {
  std::vector<std::size_t> complete;
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    const auto& p = ds.rows[i].present;
    if (std::all_of(p.begin(), p.end(), [](bool b) { return b; }))
      complete.push_back(i);
  }
  Matrix X(complete.size(), 12);
  std::vector<std::string> names;
  for (const char* n : kFeatureNames) names.emplace_back(n);
  for (const char* n : kTargetNames) names.emplace_back(n);
  for (std::size_t r = 0; r < complete.size(); ++r) {
    const Row& row = ds.rows[complete[r]];
    for (std::size_t j = 0; j < 7; ++j) X(r, j) = feature_of(row.c, j);
    for (std::size_t j = 0; j < 5; ++j) X(r, 7 + j) = row.y[j];
  }
  return pearson(X, names);
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double fraction,
                                  std::uint64_t seed) {
  if (ds.rows.size() < 10) throw ShapeError("split: need at least 10 rows");
  std::vector<std::size_t> idx(ds.rows.size());
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.shuffle(idx);
  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(fraction * ds.rows.size()));
  std::vector<bool> in_train(ds.rows.size(), false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[idx[i]] = true;
  std::pair<Dataset, Dataset> parts;
  for (std::size_t i = 0; i < ds.rows.size(); ++i)
    (in_train[i] ? parts.first : parts.second).rows.push_back(ds.rows[i]);
  return parts;
}

void write_csv(const Dataset& ds, std::ostream& out) {
  for (std::size_t j = 0; j < 7; ++j) out << kFeatureNames[j] << ',';
  for (std::size_t j = 0; j < 5; ++j) out << kTargetNames[j] << ',';
  out << "provenance\n";
  for (const Row& r : ds.rows) {
    for (std::size_t j = 0; j < 7; ++j) out << fmt_double(feature_of(r.c, j)) << ',';
    for (std::size_t j = 0; j < 5; ++j) {
      if (r.present[j]) out << fmt_double(r.y[j]);
      out << ',';
    }
    out << (r.prov == Provenance::kOracle ? "oracle" : "external") << '\n';
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

void expect_header(const std::vector<std::string>& fields, bool with_provenance) {
  std::vector<std::string> want;
  for (const char* n : kFeatureNames) want.emplace_back(n);
  for (const char* n : kTargetNames) want.emplace_back(n);
  if (with_provenance) want.emplace_back("provenance");
  if (fields.size() < want.size())
    throw ConfigError("dataset CSV: unexpected header");
  for (std::size_t j = 0; j < want.size(); ++j)
    if (fields[j] != want[j])
      throw ConfigError("dataset CSV: expected column '" + want[j] +
                        "', found '" + fields[j] + "'");
}

Row parse_row(const std::vector<std::string>& f, std::size_t line_no) {
  if (f.size() < 12)
    throw ConfigError("dataset CSV: line " + std::to_string(line_no) +
                      " has too few fields");
  Row r;
  r.c.theta = parse_double(f[0]);
  r.c.h_p = parse_double(f[1]);
  r.c.H = parse_double(f[2]);
  r.c.d = parse_double(f[3]);
  r.c.U0 = parse_double(f[4]);
  r.c.rho_b = parse_double(f[5]);
  r.c.rho_a = parse_double(f[6]);
  for (std::size_t j = 0; j < 5; ++j) {
    if (f[7 + j].empty()) {
      r.present[j] = false;
      r.y[j] = 0.0;
    } else {
      r.present[j] = true;
      r.y[j] = parse_double(f[7 + j]);
    }
  }
  return r;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("dataset CSV: empty file");
  expect_header(split_line(line), true);
  Dataset ds;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split_line(line);
    if (f.size() != 13)
      throw ConfigError("dataset CSV: line " + std::to_string(line_no) +
                        " must have 13 fields");
    Row r = parse_row(f, line_no);
    if (f[12] == "oracle")
      r.prov = Provenance::kOracle;
    else if (f[12] == "external")
      r.prov = Provenance::kExternal;
    else
      throw ConfigError("dataset CSV: unknown provenance '" + f[12] + "'");
    r.c.validate();
    ds.rows.push_back(r);
  }
  return ds;
}

std::vector<ExternalRecord> read_external_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("external CSV: empty file");
  expect_header(split_line(line), false);
  std::vector<ExternalRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const Row r = parse_row(split_line(line), line_no);
    records.push_back({r.c, r.y, r.present});
  }
  return records;
}

void write_csv_file(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  write_csv(ds, out);
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open: " + path);
  return read_csv(in);
}

}  // namespace jetsurro::data
