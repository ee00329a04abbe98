#include "jetsurro/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "jetsurro/numfmt.hpp"

namespace jetsurro::report {

namespace fs = std::filesystem;

namespace {

using Table = std::vector<std::vector<std::string>>;

bool read_table(const fs::path& path, Table& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  out.clear();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        row.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    row.push_back(cur);
    out.push_back(std::move(row));
  }
  return !out.empty();
}

double num(const std::string& s) { return s.empty() ? 0.0 : parse_double(s); }

// --- tiny SVG canvas -------------------------------------------------------

class Svg {
 public:
  Svg(double width, double height) : w_(width), h_(height) {
    body_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_fixed(w_, 0)
          << "\" height=\"" << fmt_fixed(h_, 0) << "\" viewBox=\"0 0 "
          << fmt_fixed(w_, 0) << ' ' << fmt_fixed(h_, 0) << "\">\n";
    body_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  }

  void line(double x1, double y1, double x2, double y2, const std::string& stroke,
            double width = 1.0, const std::string& dash = "") {
    body_ << "<line x1=\"" << fmt_fixed(x1) << "\" y1=\"" << fmt_fixed(y1)
          << "\" x2=\"" << fmt_fixed(x2) << "\" y2=\"" << fmt_fixed(y2)
          << "\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt_fixed(width, 1)
          << "\"";
    if (!dash.empty()) body_ << " stroke-dasharray=\"" << dash << "\"";
    body_ << "/>\n";
  }

  void circle(double x, double y, double r, const std::string& fill,
              double opacity = 1.0) {
    body_ << "<circle cx=\"" << fmt_fixed(x) << "\" cy=\"" << fmt_fixed(y)
          << "\" r=\"" << fmt_fixed(r, 1) << "\" fill=\"" << fill << "\"";
    if (opacity < 1.0) body_ << " fill-opacity=\"" << fmt_fixed(opacity, 2) << "\"";
    body_ << "/>\n";
  }

  void rect(double x, double y, double w, double h, const std::string& fill) {
    body_ << "<rect x=\"" << fmt_fixed(x) << "\" y=\"" << fmt_fixed(y)
          << "\" width=\"" << fmt_fixed(std::max(0.0, w)) << "\" height=\""
          << fmt_fixed(std::max(0.0, h)) << "\" fill=\"" << fill << "\"/>\n";
  }

  void polygon(const std::vector<std::pair<double, double>>& pts,
               const std::string& fill, double opacity) {
    body_ << "<polygon points=\"";
    for (const auto& [x, y] : pts) body_ << fmt_fixed(x) << ',' << fmt_fixed(y) << ' ';
    body_ << "\" fill=\"" << fill << "\" fill-opacity=\"" << fmt_fixed(opacity, 2)
          << "\"/>\n";
  }

  void polyline(const std::vector<std::pair<double, double>>& pts,
                const std::string& stroke, double width = 1.5) {
    body_ << "<polyline points=\"";
    for (const auto& [x, y] : pts) body_ << fmt_fixed(x) << ',' << fmt_fixed(y) << ' ';
    body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
          << fmt_fixed(width, 1) << "\"/>\n";
  }

  void text(double x, double y, const std::string& s, int size = 11,
            const std::string& anchor = "start") {
    body_ << "<text x=\"" << fmt_fixed(x) << "\" y=\"" << fmt_fixed(y)
          << "\" font-size=\"" << size
          << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\">" << s
          << "</text>\n";
  }

  std::string finish() {
    body_ << "</svg>";
    return body_.str();
  }

 private:
  double w_, h_;
  std::ostringstream body_;
};

struct Frame {
  double x0, y0, x1, y1;  // pixel corners of the plot area (y0 = top)
  double vx0, vx1, vy0, vy1;
  double px(double v) const { return x0 + (v - vx0) / (vx1 - vx0) * (x1 - x0); }
  double py(double v) const { return y1 - (v - vy0) / (vy1 - vy0) * (y1 - y0); }
};

void axes(Svg& svg, const Frame& f, const std::string& xlabel,
          const std::string& ylabel) {
  svg.line(f.x0, f.y1, f.x1, f.y1, "#333");
  svg.line(f.x0, f.y0, f.x0, f.y1, "#333");
  svg.text(f.x0, f.y1 + 14, fmt_fixed(f.vx0, 2), 10);
  svg.text(f.x1, f.y1 + 14, fmt_fixed(f.vx1, 2), 10, "end");
  svg.text(f.x0 - 4, f.y1, fmt_fixed(f.vy0, 2), 10, "end");
  svg.text(f.x0 - 4, f.y0 + 8, fmt_fixed(f.vy1, 2), 10, "end");
  svg.text(0.5 * (f.x0 + f.x1), f.y1 + 28, xlabel, 11, "middle");
  svg.text(f.x0 - 4, f.y0 - 6, ylabel, 11, "end");
}

std::string color_scale(double t) {  // 0 -> blue, 1 -> red
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(40 + 205 * t));
  const int g = static_cast<int>(std::lround(60 + 40 * (1.0 - std::abs(2 * t - 1))));
  const int b = static_cast<int>(std::lround(40 + 205 * (1.0 - t)));
  std::ostringstream s;
  s << "rgb(" << r << ',' << g << ',' << b << ')';
  return s.str();
}

// --- plot builders ---------------------------------------------------------

std::string scatter_svg(const std::string& title,
                        const std::vector<std::pair<double, double>>& train,
                        const std::vector<std::pair<double, double>>& val) {
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto* set : {&train, &val})
    for (const auto& [o, p] : *set) {
      if (first) {
        lo = std::min(o, p);
        hi = std::max(o, p);
        first = false;
      }
      lo = std::min({lo, o, p});
      hi = std::max({hi, o, p});
    }
  if (hi <= lo) hi = lo + 1.0;
  const double pad = 0.05 * (hi - lo);
  Svg svg(320, 300);
  const Frame f{45, 25, 305, 255, lo - pad, hi + pad, lo - pad, hi + pad};
  svg.text(160, 14, title, 12, "middle");
  svg.line(f.px(f.vx0), f.py(f.vx0), f.px(f.vx1), f.py(f.vx1), "#888", 1.0, "4 3");
  for (const auto& [o, p] : train) svg.circle(f.px(o), f.py(p), 2.2, "#2b6cb0", 0.55);
  for (const auto& [o, p] : val) svg.circle(f.px(o), f.py(p), 2.6, "#dd6b20", 0.8);
  axes(svg, f, "simulated", "predicted");
  svg.circle(60, 270, 3, "#2b6cb0");
  svg.text(68, 274, "train", 10);
  svg.circle(110, 270, 3, "#dd6b20");
  svg.text(118, 274, "validation", 10);
  return svg.finish();
}

std::string learning_curve_svg(const Table& t) {
  // columns: size,train_mean,train_std,cv_mean,cv_std,plateau
  std::vector<double> size, tm, ts, cm, cs;
  double plateau = -1.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    size.push_back(num(t[i][0]));
    tm.push_back(num(t[i][1]));
    ts.push_back(num(t[i][2]));
    cm.push_back(num(t[i][3]));
    cs.push_back(num(t[i][4]));
    if (t[i].size() > 5 && t[i][5] == "1" && plateau < 0) plateau = size.back();
  }
  double ylo = 1.0, yhi = 0.0;
  for (std::size_t i = 0; i < size.size(); ++i) {
    ylo = std::min({ylo, tm[i] - ts[i], cm[i] - cs[i]});
    yhi = std::max({yhi, tm[i] + ts[i], cm[i] + cs[i]});
  }
  ylo = std::max(ylo - 0.02, -1.0);
  yhi = std::min(yhi + 0.02, 1.05);
  Svg svg(420, 300);
  const Frame f{50, 25, 400, 255, size.front(), size.back(), ylo, yhi};
  svg.text(210, 14, "learning curve (cross-validated R2)", 12, "middle");
  for (const bool is_cv : {false, true}) {
    const auto& mean = is_cv ? cm : tm;
    const auto& sd = is_cv ? cs : ts;
    const std::string color = is_cv ? "#dd6b20" : "#2b6cb0";
    std::vector<std::pair<double, double>> band;
    for (std::size_t i = 0; i < size.size(); ++i)
      band.emplace_back(f.px(size[i]), f.py(mean[i] + sd[i]));
    for (std::size_t i = size.size(); i-- > 0;)
      band.emplace_back(f.px(size[i]), f.py(mean[i] - sd[i]));
    svg.polygon(band, color, 0.15);
    std::vector<std::pair<double, double>> linepts;
    for (std::size_t i = 0; i < size.size(); ++i)
      linepts.emplace_back(f.px(size[i]), f.py(mean[i]));
    svg.polyline(linepts, color);
  }
  if (plateau > 0)
    svg.line(f.px(plateau), f.y0, f.px(plateau), f.y1, "#38a169", 1.0, "5 4");
  axes(svg, f, "training set size", "R2");
  svg.text(60, 275, "train", 10);
  svg.line(85, 271, 105, 271, "#2b6cb0", 2);
  svg.text(115, 275, "cross-validation", 10);
  svg.line(200, 271, 220, 271, "#dd6b20", 2);
  if (plateau > 0) svg.text(240, 275, "plateau at " + fmt_fixed(plateau, 0), 10);
  return svg.finish();
}

std::string bar_svg(const std::string& target,
                    const std::vector<std::pair<std::string, double>>& entries) {
  const double w = 380, row_h = 20;
  const double h = 40 + row_h * entries.size();
  double vmax = 0.0;
  for (const auto& [name, v] : entries) vmax = std::max(vmax, v);
  if (vmax <= 0.0) vmax = 1.0;
  Svg svg(w, h);
  svg.text(w / 2, 14, "mean |phi| for " + target, 12, "middle");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const double y = 28 + row_h * i;
    svg.text(70, y + 13, entries[i].first, 10, "end");
    svg.rect(76, y + 3, (w - 90) * entries[i].second / vmax, row_h - 7, "#2b6cb0");
    svg.text(80 + (w - 90) * entries[i].second / vmax, y + 13,
             fmt_fixed(entries[i].second, 4), 9);
  }
  return svg.finish();
}

struct SummaryRow {
  std::string feature;
  std::vector<std::array<double, 3>> pts;  // phi, raw, scaled
};

std::string summary_svg(const std::string& target,
                        const std::vector<SummaryRow>& rows) {
  double lo = 0.0, hi = 0.0;
  for (const auto& r : rows)
    for (const auto& p : r.pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
  if (hi <= lo) hi = lo + 1.0;
  const double row_h = 26;
  const double h = 60 + row_h * rows.size();
  Svg svg(440, h);
  const Frame f{90, 25, 420, h - 30, lo, hi, 0, 1};
  svg.text(220, 14, "summary for " + target, 12, "middle");
  svg.line(f.px(0.0), f.y0, f.px(0.0), f.y1, "#999", 1.0, "3 3");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double yc = 34 + row_h * r + row_h / 2;
    svg.text(86, yc + 4, rows[r].feature, 10, "end");
    for (std::size_t i = 0; i < rows[r].pts.size(); ++i) {
      // Deterministic vertical jitter from the point index.
      const double jitter =
          (static_cast<double>((i * 2654435761u) % 1000) / 1000.0 - 0.5) * (row_h - 8);
      svg.circle(f.px(rows[r].pts[i][0]), yc + jitter, 1.8,
                 color_scale(rows[r].pts[i][2]), 0.7);
    }
  }
  svg.text(f.px(lo), h - 8, fmt_fixed(lo, 3), 10);
  svg.text(f.px(hi), h - 8, fmt_fixed(hi, 3), 10, "end");
  svg.text((f.x0 + f.x1) / 2, h - 8, "phi (blue = low value, red = high)", 10,
           "middle");
  return svg.finish();
}

std::string dependence_svg(const std::string& title,
                           const std::vector<std::pair<double, double>>& pts) {
  double xlo = pts.front().first, xhi = pts.back().first;
  double ylo = pts.front().second, yhi = pts.front().second;
  for (const auto& [x, y] : pts) {
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  if (xhi <= xlo) xhi = xlo + 1.0;
  if (yhi <= ylo) yhi = ylo + 1.0;
  Svg svg(320, 280);
  const Frame f{50, 25, 305, 235, xlo, xhi, ylo, yhi};
  svg.text(160, 14, title, 12, "middle");
  if (ylo < 0 && yhi > 0) svg.line(f.x0, f.py(0), f.x1, f.py(0), "#999", 1.0, "3 3");
  for (const auto& [x, y] : pts) svg.circle(f.px(x), f.py(y), 2.0, "#2b6cb0", 0.6);
  axes(svg, f, "value", "phi");
  return svg.finish();
}

std::string waterfall_svg(const std::string& title, const Table& t) {
  // columns: label,delta,running
  struct Step {
    std::string label;
    double delta, running;
  };
  std::vector<Step> steps;
  for (std::size_t i = 1; i < t.size(); ++i)
    steps.push_back({t[i][0], num(t[i][1]), num(t[i][2])});
  if (steps.empty()) return "";
  double lo = steps.front().running, hi = lo;
  for (const auto& s : steps) {
    lo = std::min({lo, s.running, s.running - s.delta});
    hi = std::max({hi, s.running, s.running - s.delta});
  }
  if (hi <= lo) hi = lo + 1.0;
  const double row_h = 22;
  const double h = 50 + row_h * steps.size();
  Svg svg(430, h);
  const Frame f{110, 25, 410, h - 20, lo - 0.05 * (hi - lo), hi + 0.05 * (hi - lo), 0, 1};
  svg.text(215, 14, title, 12, "middle");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double y = 30 + row_h * i;
    svg.text(106, y + 13, steps[i].label, 10, "end");
    if (i == 0 || i + 1 == steps.size()) {
      svg.line(f.px(steps[i].running), y + 2, f.px(steps[i].running), y + row_h - 4,
               "#333", 2.0);
      svg.text(f.px(steps[i].running) + 4, y + 13, fmt_fixed(steps[i].running, 3), 9);
    } else {
      const double from = steps[i].running - steps[i].delta;
      const double x0 = f.px(std::min(from, steps[i].running));
      const double x1 = f.px(std::max(from, steps[i].running));
      svg.rect(x0, y + 4, x1 - x0, row_h - 9,
               steps[i].delta >= 0 ? "#c53030" : "#2b6cb0");
      svg.text(x1 + 4, y + 13, fmt_fixed(steps[i].delta, 3), 9);
    }
  }
  return svg.finish();
}

// --- document assembly -----------------------------------------------------

struct Doc {
  bool html;
  std::ostringstream out;

  void heading(int level, const std::string& s) {
    if (html)
      out << "<h" << level << ">" << s << "</h" << level << ">\n";
    else
      out << std::string(level, '#') << ' ' << s << "\n\n";
  }

  void paragraph(const std::string& s) {
    if (html)
      out << "<p>" << s << "</p>\n";
    else
      out << s << "\n\n";
  }

  void table(const Table& t) {
    if (t.empty()) return;
    if (html) {
      out << "<table>\n<tr>";
      for (const auto& cell : t[0]) out << "<th>" << cell << "</th>";
      out << "</tr>\n";
      for (std::size_t i = 1; i < t.size(); ++i) {
        out << "<tr>";
        for (const auto& cell : t[i]) out << "<td>" << cell << "</td>";
        out << "</tr>\n";
      }
      out << "</table>\n";
    } else {
      out << '|';
      for (const auto& cell : t[0]) out << ' ' << cell << " |";
      out << "\n|";
      for (std::size_t j = 0; j < t[0].size(); ++j) out << " --- |";
      out << '\n';
      for (std::size_t i = 1; i < t.size(); ++i) {
        out << '|';
        for (const auto& cell : t[i]) out << ' ' << cell << " |";
        out << '\n';
      }
      out << '\n';
    }
  }

  void svg_block(const std::string& svg) {
    if (svg.empty()) return;
    if (html)
      out << "<div class=\"plot\">" << svg << "</div>\n";
    else
      out << svg << "\n\n";
  }
};

}  // namespace

std::string render(const std::string& in_dir, const std::string& format,
                   std::vector<std::string>* missing_out) {
  const bool html = (format == "html");
  Doc doc{html, {}};
  std::vector<std::string> missing;
  const fs::path dir(in_dir);

  if (html) {
    doc.out << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">"
            << "<title>jetsurro report</title>\n<style>"
            << "body{font-family:sans-serif;max-width:1000px;margin:24px auto;}"
            << "table{border-collapse:collapse;margin:8px 0;}"
            << "td,th{border:1px solid #bbb;padding:3px 9px;font-size:13px;}"
            << ".plot{display:inline-block;margin:6px;}"
            << ".missing{color:#a00;}"
            << "</style></head>\n<body>\n";
  }
  doc.heading(1, "jetsurro pipeline report");

  const auto mark_missing = [&](const std::string& what) {
    missing.push_back(what);
    if (html)
      doc.out << "<p class=\"missing\">missing input: " << what << "</p>\n";
    else
      doc.out << "*missing input: " << what << "*\n\n";
  };

  // Model evaluation tables.
  doc.heading(2, "Model evaluation");
  Table t;
  if (read_table(dir / "eval_kfold.csv", t)) {
    doc.paragraph("K-fold cross validation (mean and std over folds):");
    doc.table(t);
  } else {
    mark_missing("eval_kfold.csv");
  }
  if (read_table(dir / "eval_validation.csv", t)) {
    doc.paragraph("Held-out validation:");
    doc.table(t);
  } else {
    mark_missing("eval_validation.csv");
  }

  // Predicted vs simulated scatter panels.
  doc.heading(2, "Predicted vs simulated");
  if (read_table(dir / "predictions.csv", t)) {
    std::map<std::string, std::pair<std::vector<std::pair<double, double>>,
                                    std::vector<std::pair<double, double>>>>
        by_target;
    for (std::size_t i = 1; i < t.size(); ++i) {
      auto& bucket = by_target[t[i][0]];
      auto& set = (t[i][1] == "validation") ? bucket.second : bucket.first;
      set.emplace_back(num(t[i][2]), num(t[i][3]));
    }
    for (const auto& [target, sets] : by_target)
      doc.svg_block(scatter_svg(target, sets.first, sets.second));
  } else {
    mark_missing("predictions.csv");
  }

  // Learning curve.
  doc.heading(2, "Learning curve");
  if (read_table(dir / "learning_curve.csv", t) && t.size() > 1) {
    doc.svg_block(learning_curve_svg(t));
  } else {
    mark_missing("learning_curve.csv");
  }

  // SHAP sections.
  doc.heading(2, "Feature importance (mean |phi|)");
  if (read_table(dir / "bar.csv", t)) {
    std::map<std::string, std::vector<std::pair<std::string, double>>> by_target;
    std::vector<std::string> target_order;
    for (std::size_t i = 1; i < t.size(); ++i) {
      if (!by_target.count(t[i][0])) target_order.push_back(t[i][0]);
      by_target[t[i][0]].emplace_back(t[i][1], num(t[i][2]));
    }
    for (const auto& target : target_order)
      doc.svg_block(bar_svg(target, by_target[target]));
  } else {
    mark_missing("bar.csv");
  }

  doc.heading(2, "SHAP summary");
  {
    std::vector<fs::path> files;
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("summary_", 0) == 0 && name.ends_with(".csv"))
          files.push_back(e.path());
      }
    std::sort(files.begin(), files.end());
    if (files.empty()) mark_missing("summary_<target>.csv");
    for (const auto& path : files) {
      if (!read_table(path, t)) continue;
      // columns: feature,raw,scaled,phi
      std::vector<SummaryRow> rows;
      std::map<std::string, std::size_t> row_of;
      for (std::size_t i = 1; i < t.size(); ++i) {
        if (!row_of.count(t[i][0])) {
          row_of[t[i][0]] = rows.size();
          rows.push_back({t[i][0], {}});
        }
        rows[row_of[t[i][0]]].pts.push_back({num(t[i][3]), num(t[i][1]), num(t[i][2])});
      }
      std::string target = path.filename().string();
      target = target.substr(8, target.size() - 12);
      doc.svg_block(summary_svg(target, rows));
    }
  }

  doc.heading(2, "SHAP dependence");
  {
    std::vector<fs::path> files;
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("dependence_", 0) == 0 && name.ends_with(".csv"))
          files.push_back(e.path());
      }
    std::sort(files.begin(), files.end());
    if (files.empty()) mark_missing("dependence_<target>_<feature>.csv");
    for (const auto& path : files) {
      if (!read_table(path, t) || t.size() < 2) continue;
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 1; i < t.size(); ++i)
        pts.emplace_back(num(t[i][0]), num(t[i][1]));
      std::string title = path.stem().string().substr(11);
      doc.svg_block(dependence_svg(title, pts));
    }
  }

  doc.heading(2, "SHAP waterfalls");
  {
    std::vector<fs::path> files;
    if (fs::exists(dir))
      for (const auto& e : fs::directory_iterator(dir)) {
        const std::string name = e.path().filename().string();
        if (name.rfind("waterfall_", 0) == 0 && name.ends_with(".csv"))
          files.push_back(e.path());
      }
    std::sort(files.begin(), files.end());
    if (files.empty()) mark_missing("waterfall_*.csv");
    for (const auto& path : files) {
      if (!read_table(path, t)) continue;
      doc.svg_block(waterfall_svg(path.stem().string(), t));
    }
  }

  if (html) doc.out << "</body></html>\n";
  if (missing_out) *missing_out = missing;
  return doc.out.str();
}

}  // namespace jetsurro::report
