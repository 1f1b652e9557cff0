#include "dualdi/report.hpp"

#include <cstdio>
#include <json.hpp>

#include "dualdi/image_io.hpp"

namespace dualdi {

FoldResult score_fold(int fold, ConfusionMatrix cm) {
  FoldResult r;
  r.fold = fold;
  r.acc = accuracy(cm);
  r.uf1 = uf1(cm);
  r.uar = uar(cm);
  r.eval_samples = static_cast<std::size_t>(cm.total());
  r.confusion = std::move(cm);
  return r;
}

namespace {

template <typename Get>
MeanStd aggregate_by(const std::vector<FoldResult>& folds, Get get) {
  std::vector<double> v;
  v.reserve(folds.size());
  for (const auto& f : folds) v.push_back(get(f));
  return aggregate(v);
}

nlohmann::ordered_json mean_std_json(const MeanStd& ms) {
  nlohmann::ordered_json j;
  j["mean"] = ms.mean;
  j["std"] = ms.std;
  return j;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

MeanStd EvalReport::acc() const {
  return aggregate_by(folds, [](const FoldResult& f) { return f.acc; });
}
MeanStd EvalReport::uf1() const {
  return aggregate_by(folds, [](const FoldResult& f) { return f.uf1; });
}
MeanStd EvalReport::uar() const {
  return aggregate_by(folds, [](const FoldResult& f) { return f.uar; });
}

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["config"] = report.config;
  j["k"] = report.k;
  j["strategy"] = std::string(fold_strategy_name(report.strategy));
  j["seed"] = report.seed;
  j["std"] = "population";
  j["classes"] = report.class_names;
  auto folds = nlohmann::ordered_json::array();
  for (const auto& f : report.folds) {
    nlohmann::ordered_json fj;
    fj["fold"] = f.fold;
    auto rows = nlohmann::ordered_json::array();
    for (int i = 0; i < f.confusion.num_classes(); ++i) {
      auto row = nlohmann::ordered_json::array();
      for (int c = 0; c < f.confusion.num_classes(); ++c) row.push_back(f.confusion.at(i, c));
      rows.push_back(std::move(row));
    }
    fj["confusion"] = std::move(rows);
    fj["acc"] = f.acc;
    fj["uf1"] = f.uf1;
    fj["uar"] = f.uar;
    fj["train_samples"] = f.train_samples;
    fj["eval_samples"] = f.eval_samples;
    fj["epochs_run"] = f.epochs_run;
    fj["best_epoch"] = f.best_epoch;
    folds.push_back(std::move(fj));
  }
  j["folds"] = std::move(folds);
  nlohmann::ordered_json agg;
  agg["acc"] = mean_std_json(report.acc());
  agg["uf1"] = mean_std_json(report.uf1());
  agg["uar"] = mean_std_json(report.uar());
  j["aggregate"] = std::move(agg);
  return j.dump(2) + "\n";
}

std::string report_to_csv(const EvalReport& report) {
  std::string out = "config,fold,acc,uf1,uar\n";
  for (const auto& f : report.folds) {
    out += report.config + "," + std::to_string(f.fold) + "," + fmt(f.acc) + "," + fmt(f.uf1) +
           "," + fmt(f.uar) + "\n";
  }
  return out;
}

void write_report(const std::filesystem::path& json_path, const EvalReport& report) {
  // Serialize both before touching the filesystem so a failure leaves nothing.
  const std::string json = report_to_json(report);
  const std::string csv = report_to_csv(report);
  auto csv_path = json_path;
  csv_path.replace_extension(".csv");
  write_file_atomic(json_path, json);
  write_file_atomic(csv_path, csv);
}

}  // namespace dualdi
