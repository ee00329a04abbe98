#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "jetsurro/report.hpp"

namespace fs = std::filesystem;
using namespace jetsurro;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "jetsurro_report_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("render marks every missing section on an empty directory") {
  TempDir tmp;
  std::vector<std::string> missing;
  const std::string html = report::render(tmp.path.string(), "html", &missing);
  CHECK(missing.size() == 8);
  CHECK(html.find("missing input: eval_kfold.csv") != std::string::npos);
  CHECK(html.rfind("<!DOCTYPE html>", 0) == 0);
}

TEST_CASE("render embeds tables and plots from partial inputs") {
  TempDir tmp;
  write_file(tmp.path / "eval_validation.csv",
             "target,r2,rmse\nx_m,0.95,0.2\naverage,0.95,0.2\n");
  write_file(tmp.path / "predictions.csv",
             "target,split,observed,predicted\n"
             "x_m,train,1.0,1.1\nx_m,train,2.0,1.9\nx_m,validation,1.5,1.4\n");
  write_file(tmp.path / "learning_curve.csv",
             "size,train_mean,train_std,cv_mean,cv_std,plateau\n"
             "50,0.9,0.02,0.7,0.05,0\n150,0.92,0.01,0.85,0.03,1\n300,0.93,0.01,0.9,0.02,0\n");
  write_file(tmp.path / "waterfall_x_m_i3.csv",
             "label,delta,running\nbase,0,2.0\nU0,0.5,2.5\nd,-0.2,2.3\nprediction,0,2.3\n");

  std::vector<std::string> missing;
  const std::string html = report::render(tmp.path.string(), "html", &missing);
  CHECK(html.find("<td>0.95</td>") != std::string::npos);
  CHECK(html.find("learning curve") != std::string::npos);
  CHECK(html.find("waterfall_x_m_i3") != std::string::npos);
  CHECK(missing.size() == 4);  // kfold, bar, summary, dependence

  const std::string again = report::render(tmp.path.string(), "html", nullptr);
  CHECK(html == again);

  const std::string md = report::render(tmp.path.string(), "md", nullptr);
  CHECK(md.rfind("# jetsurro pipeline report", 0) == 0);
  CHECK(md.find("| target | r2 | rmse |") != std::string::npos);
}
