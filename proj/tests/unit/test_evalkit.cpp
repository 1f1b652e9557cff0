#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "dualdi/error.hpp"
#include "dualdi/kfold.hpp"
#include "dualdi/metrics.hpp"
#include "dualdi/report.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace dualdi;
namespace dt = dualdi::testing;

namespace {

ConfusionMatrix cm_of(const std::vector<std::vector<std::int64_t>>& rows) {
  ConfusionMatrix cm(static_cast<int>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows.size(); ++j) cm.at(int(i), int(j)) = rows[i][j];
  return cm;
}

std::vector<std::vector<std::int64_t>> random_counts(std::mt19937_64& gen, int k) {
  std::vector<std::vector<std::int64_t>> rows(k, std::vector<std::int64_t>(k));
  std::int64_t total = 0;
  for (auto& r : rows)
    for (auto& v : r) {
      // Sparse-ish so zero-support and zero-prediction classes occur.
      v = (gen() % 3 == 0) ? 0 : static_cast<std::int64_t>(gen() % 51);
      total += v;
    }
  if (total == 0) rows[0][0] = 1;
  return rows;
}

DatasetManifest manifest_with(const std::vector<std::pair<std::string, std::string>>& label_subject) {
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < label_subject.size(); ++i) {
    ManifestEntry e;
    e.annotation = {"s" + std::to_string(i), label_subject[i].second, 1, 2, 3, label_subject[i].first};
    e.frame_dir = e.annotation.sequence_id;
    entries.push_back(e);
  }
  return make_manifest(entries);
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected dualdi::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_SUITE("confusion matrix") {
  TEST_CASE("tallies") {
    std::vector<int> t{0, 1}, p{0, 1};
    CHECK(confusion_matrix(t, p, 2) == cm_of({{1, 0}, {0, 1}}));
    t = {0, 0};
    p = {1, 1};
    CHECK(confusion_matrix(t, p, 2) == cm_of({{0, 2}, {0, 0}}));
    CHECK(confusion_matrix({}, {}, 2) == cm_of({{0, 0}, {0, 0}}));
  }

  TEST_CASE("errors") {
    std::vector<int> t{0, 1}, p{0};
    CHECK(code_of([&] { confusion_matrix(t, p, 2); }) == Errc::LengthMismatch);
    p = {0, 2};
    CHECK(code_of([&] { confusion_matrix(t, p, 2); }) == Errc::IndexOutOfRange);
    p = {0, -1};
    CHECK(code_of([&] { confusion_matrix(t, p, 2); }) == Errc::IndexOutOfRange);
  }

  TEST_CASE("sums") {
    const auto cm = cm_of({{3, 1}, {2, 4}});
    CHECK(cm.total() == 10);
    CHECK(cm.trace() == 7);
    CHECK(cm.support(0) == 4);
    CHECK(cm.predicted(0) == 5);
  }
}

TEST_SUITE("metrics") {
  TEST_CASE("accuracy") {
    CHECK(accuracy(cm_of({{1, 0}, {0, 1}})) == 1.0);
    CHECK(accuracy(cm_of({{0, 2}, {0, 0}})) == 0.0);
    CHECK(accuracy(cm_of({{3, 1}, {2, 4}})) == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(code_of([] { accuracy(ConfusionMatrix(3)); }) == Errc::EmptyMatrix);
  }

  TEST_CASE("uf1") {
    CHECK(uf1(cm_of({{2, 0}, {0, 3}})) == 1.0);
    CHECK(uf1(cm_of({{1, 1}, {1, 1}})) == doctest::Approx(0.5).epsilon(1e-15));
    const std::vector<std::vector<std::int64_t>> partial{{3, 1, 0}, {2, 4, 0}, {0, 0, 0}};
    // F1_0 = 6/9, F1_1 = 8/11; class 2 is left out.
    const double want = (6.0 / 9.0 + 8.0 / 11.0) / 2.0;
    CHECK(uf1(cm_of(partial)) == doctest::Approx(want).epsilon(1e-14));
    CHECK(uf1(cm_of(partial)) == doctest::Approx(dt::brute_force_metrics(partial).uf1).epsilon(1e-14));
    CHECK(code_of([] { uf1(ConfusionMatrix(2)); }) == Errc::EmptyMatrix);
  }

  TEST_CASE("class with predictions but no support counts as zero F1") {
    const std::vector<std::vector<std::int64_t>> rows{{2, 2}, {0, 0}};
    // F1_0 = 4/6, F1_1 = 0.
    CHECK(uf1(cm_of(rows)) == doctest::Approx((4.0 / 6.0) / 2.0).epsilon(1e-14));
    CHECK(uar(cm_of(rows)) == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("uar") {
    CHECK(uar(cm_of({{2, 0}, {0, 3}})) == 1.0);
    CHECK(uar(cm_of({{1, 1}, {0, 2}})) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(uar(cm_of({{0, 2}, {0, 2}})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(code_of([] { uar(ConfusionMatrix(2)); }) == Errc::EmptyMatrix);
  }

  TEST_CASE("agreement with the brute-force oracle") {
    std::mt19937_64 gen(123);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 2 + static_cast<int>(gen() % 5);
      const auto rows = random_counts(gen, k);
      const auto cm = cm_of(rows);
      const auto o = dt::brute_force_metrics(rows);
      CHECK(std::abs(accuracy(cm) - o.accuracy) <= 1e-12);
      CHECK(std::abs(uf1(cm) - o.uf1) <= 1e-12);
      CHECK(std::abs(uar(cm) - o.uar) <= 1e-12);
      for (double m : {accuracy(cm), uf1(cm), uar(cm)}) {
        CHECK(m >= 0.0);
        CHECK(m <= 1.0);
      }
    }
  }

  TEST_CASE("permutation invariance is exact") {
    std::mt19937_64 gen(321);
    for (int trial = 0; trial < 200; ++trial) {
      const int k = 2 + static_cast<int>(gen() % 5);
      const auto rows = random_counts(gen, k);
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), gen);
      std::vector<std::vector<std::int64_t>> permuted(k, std::vector<std::int64_t>(k));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) permuted[perm[i]][perm[j]] = rows[i][j];
      const auto a = cm_of(rows);
      const auto b = cm_of(permuted);
      CHECK(accuracy(a) == accuracy(b));
      CHECK(uf1(a) == uf1(b));
      CHECK(uar(a) == uar(b));
    }
  }

  TEST_CASE("diagonal matrices score one") {
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 50; ++trial) {
      const int k = 2 + static_cast<int>(gen() % 5);
      ConfusionMatrix cm(k);
      for (int c = 0; c < k; ++c) cm.at(c, c) = static_cast<std::int64_t>(gen() % 5);
      cm.at(0, 0) += 1;
      CHECK(accuracy(cm) == 1.0);
      CHECK(uf1(cm) == 1.0);
      CHECK(uar(cm) == 1.0);
    }
  }

  TEST_CASE("aggregate uses population std") {
    std::vector<double> v{0.6, 0.6, 0.6};
    auto a = aggregate(v);
    CHECK(a.mean == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(a.std == doctest::Approx(0.0).epsilon(1e-15));
    v = {0.5, 0.7};
    a = aggregate(v);
    CHECK(a.mean == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(a.std == doctest::Approx(0.1).epsilon(1e-12));
    v = {0.42};
    a = aggregate(v);
    CHECK(a.mean == 0.42);
    CHECK(a.std == 0.0);
    CHECK(code_of([] { aggregate(std::span<const double>{}); }) == Errc::EmptyInput);
  }
}

TEST_SUITE("kfold") {
  TEST_CASE("exactly divisible stratified split") {
    std::vector<std::pair<std::string, std::string>> ls;
    for (int i = 0; i < 10; ++i) ls.emplace_back(i % 2 ? "b" : "a", "p" + std::to_string(i));
    const auto m = manifest_with(ls);
    const auto spec = kfold_split(m, 5, 42, FoldStrategy::StratifiedByLabel);
    for (int f = 0; f < 5; ++f) {
      const auto members = spec.members(m, f);
      REQUIRE(members.size() == 2);
      std::set<std::string> labels;
      for (auto i : members) labels.insert(m.entries[i].annotation.label);
      CHECK(labels.size() == 2);
    }
  }

  TEST_CASE("remainder distribution") {
    std::vector<std::pair<std::string, std::string>> ls(11, {"x", "p"});
    const auto m = manifest_with(ls);
    const auto spec = kfold_split(m, 5, 1, FoldStrategy::StratifiedByLabel);
    std::vector<std::size_t> sizes;
    for (int f = 0; f < 5; ++f) sizes.push_back(spec.members(m, f).size());
    std::sort(sizes.rbegin(), sizes.rend());
    CHECK(sizes == std::vector<std::size_t>{3, 2, 2, 2, 2});
  }

  TEST_CASE("errors") {
    std::vector<std::pair<std::string, std::string>> ls{{"a", "p1"}, {"b", "p1"}, {"a", "p2"}};
    const auto m = manifest_with(ls);
    CHECK(code_of([&] { kfold_split(m, 4, 1, FoldStrategy::StratifiedByLabel); }) == Errc::TooFewSamples);
    CHECK(code_of([&] { kfold_split(m, 3, 1, FoldStrategy::GroupedBySubject); }) == Errc::TooFewSubjects);
    CHECK(code_of([&] { kfold_split(m, 1, 1, FoldStrategy::StratifiedByLabel); }) == Errc::InvalidArgument);
  }

  TEST_CASE("strategy names") {
    CHECK(parse_fold_strategy("stratified") == FoldStrategy::StratifiedByLabel);
    CHECK(parse_fold_strategy("grouped") == FoldStrategy::GroupedBySubject);
    CHECK(fold_strategy_name(FoldStrategy::GroupedBySubject) == "grouped");
    CHECK_THROWS_AS(parse_fold_strategy("loso"), Error);
  }

  TEST_CASE("invariants on random manifests") {
    std::mt19937_64 gen(8);
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 6 + static_cast<int>(gen() % 40);
      const int n_labels = 1 + static_cast<int>(gen() % 4);
      const int n_subjects = 3 + static_cast<int>(gen() % 8);
      std::vector<std::pair<std::string, std::string>> ls;
      for (int i = 0; i < n; ++i)
        ls.emplace_back("l" + std::to_string(gen() % n_labels), "p" + std::to_string(gen() % n_subjects));
      const auto m = manifest_with(ls);
      std::set<std::string> subjects;
      for (const auto& e : m.entries) subjects.insert(e.annotation.subject_id);
      if (subjects.size() < 3) continue;
      const int k = 2 + static_cast<int>(gen() % std::min<std::size_t>(4, subjects.size() - 1));
      for (auto strategy : {FoldStrategy::StratifiedByLabel, FoldStrategy::GroupedBySubject}) {
        const std::uint64_t seed = gen();
        const auto spec = kfold_split(m, k, seed, strategy);
        CHECK(spec == kfold_split(m, k, seed, strategy));
        // Every sequence in exactly one fold.
        CHECK(spec.fold_of.size() == m.entries.size());
        std::vector<int> seen(m.entries.size(), 0);
        for (int f = 0; f < k; ++f)
          for (auto i : spec.members(m, f)) ++seen[i];
        for (int s : seen) CHECK(s == 1);
        for (const auto& [id, f] : spec.fold_of) {
          CHECK(f >= 0);
          CHECK(f < k);
        }
        if (strategy == FoldStrategy::StratifiedByLabel) {
          for (const auto& label : m.label_vocabulary) {
            std::vector<int> per(k, 0);
            for (const auto& e : m.entries)
              if (e.annotation.label == label) ++per[spec.fold_of.at(e.annotation.sequence_id)];
            CHECK(*std::max_element(per.begin(), per.end()) - *std::min_element(per.begin(), per.end()) <= 1);
          }
          std::vector<int> total(k, 0);
          for (const auto& [id, f] : spec.fold_of) ++total[f];
          CHECK(*std::max_element(total.begin(), total.end()) - *std::min_element(total.begin(), total.end()) <= 1);
        } else {
          std::map<std::string, int> subject_fold;
          for (const auto& e : m.entries) {
            const int f = spec.fold_of.at(e.annotation.sequence_id);
            auto [it, fresh] = subject_fold.emplace(e.annotation.subject_id, f);
            CHECK(it->second == f);
          }
        }
      }
    }
  }
}

TEST_SUITE("report") {
  EvalReport sample_report() {
    EvalReport r;
    r.config = "dual";
    r.k = 2;
    r.seed = 7;
    r.class_names = {"a", "b"};
    r.folds.push_back(score_fold(0, cm_of({{2, 0}, {1, 1}})));
    r.folds.push_back(score_fold(1, cm_of({{1, 1}, {0, 2}})));
    r.folds[0].train_samples = 12;
    r.folds[0].eval_samples = 4;
    return r;
  }

  TEST_CASE("json layout and aggregates") {
    const auto r = sample_report();
    const auto j = nlohmann::json::parse(report_to_json(r));
    CHECK(j["config"] == "dual");
    CHECK(j["k"] == 2);
    CHECK(j["strategy"] == "stratified");
    CHECK(j["seed"] == 7);
    CHECK(j["std"] == "population");
    REQUIRE(j["folds"].size() == 2);
    CHECK(j["folds"][0]["fold"] == 0);
    CHECK(j["folds"][0]["confusion"] == nlohmann::json::parse("[[2,0],[1,1]]"));
    CHECK(j["folds"][0]["acc"].get<double>() == doctest::Approx(0.75));
    CHECK(j["folds"][0]["train_samples"] == 12);
    const double m = (r.folds[0].acc + r.folds[1].acc) / 2;
    CHECK(j["aggregate"]["acc"]["mean"].get<double>() == doctest::Approx(m).epsilon(1e-15));
    CHECK(j["aggregate"]["acc"]["std"].get<double>() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(j["aggregate"]["uf1"]["mean"].get<double>() == doctest::Approx(r.uf1().mean));
    CHECK(j["aggregate"]["uar"]["std"].get<double>() == doctest::Approx(r.uar().std));
    CHECK(report_to_json(r) == report_to_json(sample_report()));
  }

  TEST_CASE("csv rows") {
    const std::string csv = report_to_csv(sample_report());
    CHECK(csv.rfind("config,fold,acc,uf1,uar\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.find("\ndual,0,0.75,") != std::string::npos);
  }

  TEST_CASE("write produces json and csv siblings") {
    dt::TempDir dir("report");
    write_report(dir / "r.json", sample_report());
    CHECK(std::filesystem::exists(dir / "r.json"));
    CHECK(std::filesystem::exists(dir / "r.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "r.json.tmp"));
    CHECK(dt::read_text(dir / "r.json") == report_to_json(sample_report()));
  }
}
