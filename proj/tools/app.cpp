#include "app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "dualdi/augment.hpp"
#include "dualdi/error.hpp"
#include "dualdi/frameseq.hpp"
#include "dualdi/image_io.hpp"
#include "dualdi/parallel.hpp"
#include "dualdi/synthgen.hpp"
#include "experiment.hpp"

namespace fs = std::filesystem;

namespace dualdi::app {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct GlobalOptions {
  std::uint64_t seed = 42;
  unsigned jobs = 0;  // 0: command default
  std::string out = "out";
  std::string config;
};

struct TrainFlags {
  double lr = 1e-4;
  int batch_size = 25;
  int epochs = 50;
  int patience = 5;
  int input_side = 32;
  double val_fraction = 0.2;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lr", lr, "Initial learning rate")->capture_default_str();
    cmd->add_option("--batch-size", batch_size, "Mini-batch size")->capture_default_str();
    cmd->add_option("--epochs", epochs, "Maximum epochs")->capture_default_str();
    cmd->add_option("--patience", patience, "Early-stopping patience (epochs)")->capture_default_str();
    cmd->add_option("--input-side", input_side, "Classifier input resolution")->capture_default_str();
    cmd->add_option("--val-fraction", val_fraction, "Validation share of each training fold")
        ->capture_default_str();
  }
  TrainConfig config() const {
    TrainConfig tc;
    tc.lr0 = lr;
    tc.batch_size = batch_size;
    tc.max_epochs = epochs;
    tc.patience = patience;
    tc.val_fraction = val_fraction;
    return tc;
  }
};

std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

std::string summarize(const EvalReport& r) {
  return "acc " + fixed4(r.acc().mean) + "+/-" + fixed4(r.acc().std) + " uf1 " +
         fixed4(r.uf1().mean) + "+/-" + fixed4(r.uf1().std) + " uar " + fixed4(r.uar().mean) +
         "+/-" + fixed4(r.uar().std);
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t pos = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::logic_error&) {
      pos = 0;
    }
    if (pos != item.size()) throw Error(Errc::InvalidArgument, "bad seed '" + item + "'");
    seeds.push_back(v);
  }
  if (seeds.empty()) throw Error(Errc::InvalidArgument, "empty seed list");
  return seeds;
}

// Inserts `--key value` for config-file keys not given on the command line.
void apply_config_file(std::vector<std::string>& args, const CLI::App& app,
                       const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidArgument, "cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const auto pairs = parse_config_text(buf.str());

  // Find the subcommand to look options up in.
  const CLI::App* sub = nullptr;
  for (const auto& a : args) {
    if (!a.empty() && a[0] != '-') {
      try {
        sub = app.get_subcommand(a);
      } catch (const CLI::OptionNotFound&) {
      }
      if (sub) break;
    }
  }
  for (const auto& [key, value] : pairs) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given || key == "config") continue;
    const CLI::Option* opt = sub ? sub->get_option_no_throw(flag) : nullptr;
    if (!opt) opt = app.get_option_no_throw(flag);
    if (!opt) throw Error(Errc::InvalidArgument, "unknown config key '" + key + "'");
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes") args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::Data: return kExitData;
    case ErrorKind::Training: return kExitTraining;
  }
  return kExitConfig;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> parse_config_text(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidArgument,
                  "config line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    out.emplace_back(key, trim(line.substr(eq + 1)));
  }
  return out;
}

int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic-image encoding, dual-phase augmentation and evaluation", "dualdi"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads (default: command-specific)");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--config", g.config, "key = value file; command-line flags take precedence");

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset")->fallthrough();
  int synth_n = 150;
  int synth_classes = 3;
  int synth_size = 64;
  SynthJitter jitter;
  synth->add_option("--n", synth_n, "Number of sequences")->capture_default_str();
  synth->add_option("--classes", synth_classes, "Number of motion classes")->capture_default_str();
  synth->add_option("--size", synth_size, "Frame width and height")->capture_default_str();
  synth->add_option("--noise", jitter.noise_sigma, "Pixel noise sigma")->capture_default_str();
  synth->add_option("--amp-min", jitter.amplitude_min, "Minimum peak displacement (px)")
      ->capture_default_str();
  synth->add_option("--amp-max", jitter.amplitude_max, "Maximum peak displacement (px)")
      ->capture_default_str();
  synth->add_option("--subjects", jitter.n_subjects, "Number of synthetic subjects")
      ->capture_default_str();

  // encode
  auto* encode = app.add_subcommand("encode", "Encode dynamic images")->fallthrough();
  std::string enc_manifest;
  std::string enc_mode = "full";
  int enc_resize = 224;
  bool enc_gray = false;
  bool enc_flip = false;
  bool enc_rotate = false;
  double enc_rot_limit = 10.0;
  encode->add_option("--manifest", enc_manifest, "Manifest CSV")->required();
  encode->add_option("--mode", enc_mode, "full or dual")
      ->check(CLI::IsMember({"full", "dual"}))
      ->capture_default_str();
  encode->add_option("--resize", enc_resize, "Output side length")->capture_default_str();
  encode->add_flag("--grayscale", enc_gray, "Convert frames to luma before pooling");
  encode->add_flag("--flip", enc_flip, "Also emit horizontally flipped copies");
  encode->add_flag("--rotate", enc_rotate, "Also emit randomly rotated copies");
  encode->add_option("--rotation-limit", enc_rot_limit, "Rotation bound in degrees")
      ->capture_default_str();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "k-fold evaluation of one configuration")
                         ->fallthrough();
  std::string exp_manifest;
  std::string exp_aug = "none";
  int exp_k = 5;
  std::string exp_strategy = "stratified";
  std::string exp_report;
  std::string exp_models;
  bool exp_gray = false;
  int exp_resize = 224;
  TrainFlags exp_train;
  experiment->add_option("--manifest", exp_manifest, "Manifest CSV")->required();
  experiment->add_option("--aug", exp_aug, "none | flip_rotate | dual | dual_flip_rotate")
      ->check(CLI::IsMember({"none", "flip_rotate", "dual", "dual_flip_rotate"}))
      ->capture_default_str();
  experiment->add_option("--k", exp_k, "Folds")->capture_default_str();
  experiment->add_option("--strategy", exp_strategy, "stratified | grouped")
      ->check(CLI::IsMember({"stratified", "grouped"}))
      ->capture_default_str();
  experiment->add_option("--report", exp_report, "Report JSON path (CSV written alongside)");
  experiment->add_option("--models-dir", exp_models, "Write per-fold checkpoints here");
  experiment->add_flag("--grayscale", exp_gray, "Convert frames to luma before pooling");
  experiment->add_option("--resize", exp_resize, "Dynamic image side length")->capture_default_str();
  exp_train.attach(experiment);

  // compare
  auto* compare = app.add_subcommand("compare", "All four configurations over several seeds")
                      ->fallthrough();
  std::string cmp_manifest;
  int cmp_k = 5;
  std::string cmp_seeds = "1,2,3";
  std::string cmp_strategy = "stratified";
  std::string cmp_report;
  bool cmp_gray = false;
  int cmp_resize = 224;
  TrainFlags cmp_train;
  compare->add_option("--manifest", cmp_manifest, "Manifest CSV")->required();
  compare->add_option("--k", cmp_k, "Folds")->capture_default_str();
  compare->add_option("--seeds", cmp_seeds, "Comma-separated seeds")->capture_default_str();
  compare->add_option("--strategy", cmp_strategy, "stratified | grouped")
      ->check(CLI::IsMember({"stratified", "grouped"}))
      ->capture_default_str();
  compare->add_option("--report", cmp_report, "Report directory");
  compare->add_flag("--grayscale", cmp_gray, "Convert frames to luma before pooling");
  compare->add_option("--resize", cmp_resize, "Dynamic image side length")->capture_default_str();
  cmp_train.attach(compare);

  try {
    // --config is resolved before parsing so file values act as defaults.
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--config") apply_config_file(args, app, args[i + 1]);
    }
    for (const auto& a : args) {
      if (a.rfind("--config=", 0) == 0) {
        apply_config_file(args, app, a.substr(9));
        break;
      }
    }
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const WarningSink warn = [&err](const std::string& m) { err << m << '\n'; };

  try {
    if (*synth) {
      jitter.width = jitter.height = synth_size;
      const unsigned jobs = g.jobs ? g.jobs : default_jobs();
      const SynthDataset ds = synth_dataset(synth_n, synth_classes, g.seed, jitter);
      const fs::path manifest = write_synth_dataset(g.out, ds, jobs);
      out << "synth: " << synth_n << " sequences, " << synth_classes << " classes -> "
          << manifest.string() << '\n';
      return kExitOk;
    }

    if (*encode) {
      const DatasetManifest manifest = parse_manifest(enc_manifest);
      AugmentConfig cfg;
      cfg.enable_dual_di = enc_mode == "dual";
      cfg.enable_flip = enc_flip;
      cfg.enable_rotation = enc_rotate;
      cfg.rotation_limit = enc_rot_limit;
      cfg.seed = g.seed;
      cfg.output_side = enc_resize;
      cfg.validate();
      const unsigned jobs = g.jobs ? g.jobs : default_jobs();
      const fs::path out_dir = g.out;
      fs::create_directories(out_dir);

      const std::size_t n = manifest.entries.size();
      std::vector<std::vector<std::string>> rows(n);
      std::vector<std::vector<std::string>> warnings(n);
      parallel_for(n, jobs, [&](std::size_t i) {
        const auto& entry = manifest.entries[i];
        const auto& id = entry.annotation.sequence_id;
        try {
          const FrameSequence seq = load_sequence(manifest, entry, enc_gray);
          const auto samples = expand_sequence(
              seq, entry.annotation, cfg,
              [&warnings, i](const std::string& m) { warnings[i].push_back(m); });
          for (const auto& s : samples) {
            const std::string file = s.file_stem() + ".png";
            write_png(out_dir / file, s.image);
            std::string tags;
            for (const auto& t : s.transform_tags) tags += (tags.empty() ? "" : ";") + t;
            rows[i].push_back(file + "," + s.origin + "," + s.label + "," +
                              std::string(split_role_name(s.split_role)) + "," + tags);
          }
        } catch (const Error& e) {
          throw Error(e.code(), "sequence '" + id + "': " + e.detail());
        }
      });
      std::string index = "file,sequence_id,label,split_role,tags\n";
      std::size_t count = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (const auto& m : warnings[i]) warn(m);
        for (const auto& r : rows[i]) {
          index += r + "\n";
          ++count;
        }
      }
      write_file_atomic(out_dir / "index.csv", index);
      out << "encode: " << count << " images from " << n << " sequences -> " << out_dir.string()
          << '\n';
      return kExitOk;
    }

    if (*experiment) {
      const DatasetManifest manifest = parse_manifest(exp_manifest);
      ExperimentOptions opts;
      opts.aug = exp_aug;
      opts.k = exp_k;
      opts.strategy = parse_fold_strategy(exp_strategy);
      opts.seed = g.seed;
      opts.jobs = g.jobs ? g.jobs : default_jobs();
      opts.grayscale = exp_gray;
      opts.resize = exp_resize;
      opts.input_side = exp_train.input_side;
      opts.train = exp_train.config();
      if (!exp_models.empty()) opts.models_dir = fs::path(exp_models);
      const fs::path report_path =
          exp_report.empty() ? fs::path(g.out) / ("report_" + exp_aug + ".json") : fs::path(exp_report);
      const EvalReport report = run_experiment(manifest, opts, warn);
      if (report_path.has_parent_path()) fs::create_directories(report_path.parent_path());
      write_report(report_path, report);
      out << "experiment " << report.config << " (k=" << report.k << ", seed=" << report.seed
          << "): " << summarize(report) << '\n';
      return kExitOk;
    }

    if (*compare) {
      const DatasetManifest manifest = parse_manifest(cmp_manifest);
      const auto seeds = parse_seed_list(cmp_seeds);
      const fs::path dir = cmp_report.empty() ? fs::path(g.out) : fs::path(cmp_report);
      fs::create_directories(dir);
      const std::vector<std::string> configs = {"none", "flip_rotate", "dual", "dual_flip_rotate"};

      struct Row {
        std::string config;
        std::vector<double> acc, uf1, uar;
      };
      std::vector<Row> rows;
      for (const auto& config : configs) {
        Row row{config, {}, {}, {}};
        for (auto seed : seeds) {
          ExperimentOptions opts;
          opts.aug = config;
          opts.k = cmp_k;
          opts.strategy = parse_fold_strategy(cmp_strategy);
          opts.seed = seed;
          opts.jobs = g.jobs ? g.jobs : default_jobs();
          opts.grayscale = cmp_gray;
          opts.resize = cmp_resize;
          opts.input_side = cmp_train.input_side;
          opts.train = cmp_train.config();
          const EvalReport report = run_experiment(manifest, opts, warn);
          write_report(dir / (config + "_seed" + std::to_string(seed) + ".json"), report);
          row.acc.push_back(report.acc().mean);
          row.uf1.push_back(report.uf1().mean);
          row.uar.push_back(report.uar().mean);
        }
        rows.push_back(std::move(row));
      }
      std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return aggregate(a.uf1).mean > aggregate(b.uf1).mean;
      });
      std::ostringstream csv;
      csv << "rank,config,seeds,acc_mean,acc_std,uf1_mean,uf1_std,uar_mean,uar_std\n";
      csv << std::setprecision(10);
      int rank = 1;
      for (const auto& r : rows) {
        const auto a = aggregate(r.acc);
        const auto f = aggregate(r.uf1);
        const auto u = aggregate(r.uar);
        csv << rank++ << ',' << r.config << ',' << seeds.size() << ',' << a.mean << ',' << a.std
            << ',' << f.mean << ',' << f.std << ',' << u.mean << ',' << u.std << '\n';
      }
      write_file_atomic(dir / "summary.csv", csv.str());
      out << "compare: " << configs.size() * seeds.size() << " reports; best by UF1: "
          << rows.front().config << " (" << fixed4(aggregate(rows.front().uf1).mean) << ") -> "
          << (dir / "summary.csv").string() << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}

}  // namespace dualdi::app
