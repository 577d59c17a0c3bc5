// asc: acoustic scene classification pipeline driver.
//
//   asc preprocess --manifest m.csv --combo HPD --out feats/
//   asc train      --manifest m.csv --features feats/ --combo HPD --filters 32 --out run/
//   asc predict    --checkpoint run/model.vfyc --manifest m.csv --features feats/ --combo HPD --out p.csv
//   asc ensemble   --predictions a.csv b.csv c.csv --method owa --out fused/
//   asc evaluate   --manifest m.csv --decisions OWA=fused/decisions.csv --out report/
//   asc params     --filters 16 --in-channels 3

#include <CLI11.hpp>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "asc/audio_io.hpp"
#include "asc/checkpoint.hpp"
#include "asc/ensemble.hpp"
#include "asc/error.hpp"
#include "asc/evaluate.hpp"
#include "asc/features.hpp"
#include "asc/manifest.hpp"
#include "asc/network.hpp"
#include "asc/predictions_io.hpp"
#include "asc/random.hpp"
#include "asc/tensor_io.hpp"
#include "asc/training.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct PreprocessArgs {
  std::string manifest;
  std::vector<std::string> combos;
  std::string out;
  bool force = false;
  std::size_t workers = 1;
};

struct TrainArgs {
  std::string manifest, features, combo, out;
  std::size_t filters = 16;
  std::uint64_t seed = 0;
  std::size_t epochs = 2000;
  std::size_t batch_size = 32;
  double lr = 1e-3;
};

struct PredictArgs {
  std::string checkpoint, manifest, features, combo, out, split;
  std::size_t workers = 1;
};

struct EnsembleArgs {
  std::vector<std::string> predictions;
  std::string method = "sum";
  std::string weights;
  std::string out;
};

struct EvaluateArgs {
  std::string manifest;
  std::vector<std::string> decisions;
  std::string out;
};

struct ParamsArgs {
  std::size_t filters = 16;
  std::size_t in_channels = 1;
};

// Runs fn(i) for i in [0, n) on up to `workers` threads; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex m;
  auto run = [&] {
    try {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    } catch (...) {
      std::lock_guard lock(m);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

int cmd_preprocess(const PreprocessArgs& a) {
  const auto manifest = asc::load_manifest(a.manifest);
  std::vector<asc::RepresentationCombo> combos;
  for (const auto& c : a.combos) combos.push_back(asc::combo_by_name(c));
  fs::create_directories(a.out);

  const asc::FeatureExtractor extractor;
  std::atomic<std::size_t> written{0}, skipped{0};
  parallel_for(manifest.entries.size(), a.workers, [&](std::size_t i) {
    const auto& entry = manifest.entries[i];
    std::vector<asc::RepresentationCombo> todo;
    for (const auto& c : combos) {
      if (!a.force && fs::exists(asc::feature_path(a.out, entry.clip_id(), c.name))) {
        ++skipped;
      } else {
        todo.push_back(c);
      }
    }
    if (todo.empty()) return;
    const auto clip = asc::load_clip(manifest.resolve(entry), extractor.sample_rate());
    const auto tensors = extractor.build_all(clip, todo);
    for (std::size_t k = 0; k < todo.size(); ++k) {
      auto t = tensors[k];
      t.clip_id = entry.clip_id();
      asc::save_feature_tensor(asc::feature_path(a.out, t.clip_id, todo[k].name), t, entry.label);
      ++written;
    }
  });
  std::cout << "wrote " << written << " feature files, skipped " << skipped << " existing\n";
  return kExitOk;
}

asc::FeatureTensor load_checked(const fs::path& path, const asc::ManifestEntry& entry) {
  if (!fs::exists(path)) throw asc::Error(asc::ErrorCode::Io, "missing feature file " + path.string());
  auto loaded = asc::load_feature_tensor(path);
  loaded.tensor.clip_id = entry.clip_id();
  return std::move(loaded.tensor);
}

// Stratified split: per label, a seeded shuffle sends round(20%) (at least one
// when the label has two or more clips) to validation.
void stratified_split(const asc::DatasetManifest& m, std::uint64_t seed, std::vector<std::size_t>& train,
                      std::vector<std::size_t>& val) {
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    if (m.entries[i].split == asc::Split::Test) continue;
    by_label[m.entries[i].label].push_back(i);
  }
  asc::Rng rng(seed, "split");
  for (auto& [label, idx] : by_label) {
    rng.shuffle(idx.begin(), idx.end());
    std::size_t n_val = 0;
    if (idx.size() >= 2) n_val = std::max<std::size_t>(1, static_cast<std::size_t>(0.2 * idx.size() + 0.5));
    val.insert(val.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
    train.insert(train.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(val.begin(), val.end());
}

int cmd_train(const TrainArgs& a) {
  if (a.filters != 16 && a.filters != 32 && a.filters != 64) {
    std::cerr << "warning: --filters " << a.filters << " is outside {16, 32, 64}\n";
  }
  const auto manifest = asc::load_manifest(a.manifest);
  const auto& combo = asc::combo_by_name(a.combo);
  const auto& labels = asc::LabelSet::scenes();

  std::vector<std::size_t> train_idx, val_idx;
  bool tagged = false;
  for (const auto& e : manifest.entries) tagged = tagged || (e.split == asc::Split::Validation);
  if (tagged) {
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
      const auto s = manifest.entries[i].split;
      if (s == asc::Split::Validation) val_idx.push_back(i);
      else if (s == asc::Split::Train || !s) train_idx.push_back(i);
    }
  } else {
    stratified_split(manifest, a.seed, train_idx, val_idx);
  }

  asc::nn::Dataset train_set, val_set;
  for (auto i : train_idx) {
    const auto& e = manifest.entries[i];
    train_set.add(load_checked(asc::feature_path(a.features, e.clip_id(), combo.name), e), labels.index_of(e.label));
  }
  for (auto i : val_idx) {
    const auto& e = manifest.entries[i];
    val_set.add(load_checked(asc::feature_path(a.features, e.clip_id(), combo.name), e), labels.index_of(e.label));
  }
  if (train_set.empty()) throw asc::Error(asc::ErrorCode::EmptySplit, "no training clips");
  if (val_set.empty()) throw asc::Error(asc::ErrorCode::EmptySplit, "no validation clips");

  asc::nn::NetworkConfig cfg;
  cfg.base_filters = a.filters;
  cfg.in_channels = train_set.channels();
  cfg.n_classes = labels.size();
  cfg.input_height = train_set.height();
  cfg.input_width = train_set.width();
  asc::nn::Network net(cfg, a.seed);

  asc::nn::TrainingSchedule schedule;
  schedule.max_epochs = a.epochs;
  schedule.batch_size = a.batch_size;
  schedule.initial_lr = a.lr;

  asc::nn::FitOptions opts;
  opts.seed = a.seed;
  opts.on_epoch = [](const asc::nn::EpochRecord& r) {
    std::cout << "epoch " << r.epoch << " lr " << r.learning_rate << " loss " << r.train_loss << " train_acc "
              << r.train_accuracy << " val_acc " << r.val_accuracy << '\n';
    return true;
  };
  std::cout << "train " << train_set.size() << " clips, validation " << val_set.size() << " clips, "
            << net.param_count() << " parameters\n";
  const auto result = asc::nn::fit(net, train_set, val_set, schedule, opts);

  fs::create_directories(a.out);
  asc::nn::save_checkpoint(result.best, fs::path(a.out) / "model.vfyc");
  std::ofstream log(fs::path(a.out) / "train_log.csv");
  asc::nn::write_training_log(log, result.log);
  if (!log) throw asc::Error(asc::ErrorCode::Io, "cannot write training log");
  std::cout << "best epoch " << result.best_epoch << " val_acc " << result.best.meta.best_val_accuracy
            << (result.early_stopped ? " (early stop)" : "") << '\n';
  return kExitOk;
}

int cmd_predict(const PredictArgs& a) {
  const auto ckpt = asc::nn::load_checkpoint(a.checkpoint);
  const auto net = asc::nn::restore_network(ckpt);
  const auto manifest = asc::load_manifest(a.manifest);
  const auto& combo = asc::combo_by_name(a.combo);
  std::optional<asc::Split> split;
  if (!a.split.empty()) {
    split = asc::parse_split(a.split);
    if (!split) throw asc::Error(asc::ErrorCode::InvalidArgument, "unknown split '" + a.split + "'");
  }

  const auto& cfg = net.config();
  asc::nn::Dataset data(cfg.in_channels, cfg.input_height, cfg.input_width);
  const auto shape = [](std::size_t h, std::size_t w, std::size_t c) {
    return std::to_string(h) + "x" + std::to_string(w) + "x" + std::to_string(c);
  };
  for (const auto& e : manifest.entries) {
    if (split && e.split != split) continue;
    const auto t = load_checked(asc::feature_path(a.features, e.clip_id(), combo.name), e);
    if (t.channels != cfg.in_channels || t.n_mels != cfg.input_height || t.frames != cfg.input_width) {
      throw asc::Error(asc::ErrorCode::ShapeMismatch, "features " + e.clip_id() + " are " +
                                                          shape(t.n_mels, t.frames, t.channels) +
                                                          ", checkpoint expects " +
                                                          shape(cfg.input_height, cfg.input_width, cfg.in_channels));
    }
    data.add(t.values, 0, e.clip_id());
  }

  const auto probs = asc::nn::predict_dataset(net, data, 32, a.workers);
  asc::PredictionTable table;
  for (std::size_t i = 0; i < data.size(); ++i) {
    table.clip_ids.push_back(data.id(i));
    table.scores.emplace_back(probs[i].begin(), probs[i].end());
  }
  asc::write_predictions(fs::path(a.out), table);
  std::cout << "wrote " << table.size() << " predictions to " << a.out << '\n';
  return kExitOk;
}

int cmd_ensemble(const EnsembleArgs& a) {
  const auto method = asc::ensemble::parse_method(a.method);
  std::optional<asc::ensemble::OwaWeights> weights;
  if (!a.weights.empty()) weights = asc::ensemble::parse_weights(a.weights);
  if (weights && method != asc::ensemble::FusionMethod::Owa) {
    std::cerr << "warning: --owa-weights ignored for method " << a.method << '\n';
  }

  std::vector<asc::PredictionTable> tables;
  for (const auto& p : a.predictions) {
    auto t = asc::read_predictions(fs::path(p));
    tables.push_back(tables.empty() ? std::move(t) : asc::align_to(tables.front(), t));
  }
  const auto& labels = asc::LabelSet::scenes();
  const auto& ref = tables.front();

  asc::PredictionTable fused;
  fused.clip_ids = ref.clip_ids;
  std::vector<asc::DecisionEntry> decisions;
  for (std::size_t i = 0; i < ref.size(); ++i) {
    std::vector<std::vector<double>> rows;
    for (const auto& t : tables) rows.push_back(t.scores[i]);
    const asc::ensemble::EnsembleInput input(rows);
    auto scores = asc::ensemble::fuse(input, method, weights);
    decisions.push_back({ref.clip_ids[i], labels.name(asc::ensemble::decide(scores))});
    fused.scores.push_back(std::move(scores));
  }
  const fs::path out(a.out);
  fs::create_directories(out);
  asc::write_predictions(out / "fused.csv", fused);
  asc::write_decisions(out / "decisions.csv", decisions);
  std::cout << "fused " << tables.size() << " models over " << ref.size() << " clips (" << a.method << ")\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateArgs& a) {
  const auto manifest = asc::load_manifest(a.manifest);
  const auto& labels = asc::LabelSet::scenes();
  std::map<std::string, std::size_t> truth;
  for (const auto& e : manifest.entries) truth[e.clip_id()] = labels.index_of(e.label);

  std::vector<asc::evaluate::MethodColumn> columns;
  for (const auto& spec : a.decisions) {
    const auto eq = spec.find('=');
    const std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
    const std::string path = eq == std::string::npos ? spec : spec.substr(eq + 1);
    asc::evaluate::ConfusionMatrix cm(labels.size());
    for (const auto& d : asc::read_decisions(path)) {
      const auto it = truth.find(d.clip_id);
      if (it == truth.end()) {
        throw asc::Error(asc::ErrorCode::ClipSetMismatch, "clip '" + d.clip_id + "' in " + path + " is not in the manifest");
      }
      cm.accumulate(it->second, labels.index_of(d.label));
    }
    auto acc = asc::evaluate::class_accuracies(cm, labels);
    for (const auto& w : acc.warnings) std::cerr << "warning: " << name << ": " << w << '\n';
    columns.push_back({name, std::move(acc)});
  }

  const fs::path out(a.out);
  fs::create_directories(out);
  std::ofstream csv(out / "report.csv"), txt(out / "report.txt");
  asc::evaluate::write_report_csv(csv, labels, columns);
  asc::evaluate::write_report_table(txt, labels, columns);
  if (!csv || !txt) throw asc::Error(asc::ErrorCode::Io, "cannot write report in " + out.string());
  asc::evaluate::write_report_table(std::cout, labels, columns);
  return kExitOk;
}

int cmd_params(const ParamsArgs& a) {
  asc::nn::NetworkConfig cfg;
  cfg.base_filters = a.filters;
  cfg.in_channels = a.in_channels;
  const asc::nn::Network net(cfg);
  std::cout << net.param_count() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic scene classification pipeline"};
  app.require_subcommand(1);
  const std::vector<std::string> combo_names = {"M", "LRD", "HP", "HPM", "HPD", "HPLR"};

  PreprocessArgs pre;
  auto* s_pre = app.add_subcommand("preprocess", "Extract feature tensors for every manifest clip");
  s_pre->add_option("--manifest", pre.manifest)->required();
  s_pre->add_option("--combo", pre.combos, "one or more representation combos")
      ->required()
      ->check(CLI::IsMember(combo_names));
  s_pre->add_option("--out", pre.out)->required();
  s_pre->add_flag("--force", pre.force, "rewrite existing feature files");
  s_pre->add_option("--workers", pre.workers)->check(CLI::PositiveNumber);

  TrainArgs tr;
  auto* s_tr = app.add_subcommand("train", "Train one network on precomputed features");
  s_tr->add_option("--manifest", tr.manifest)->required();
  s_tr->add_option("--features", tr.features)->required();
  s_tr->add_option("--combo", tr.combo)->required()->check(CLI::IsMember(combo_names));
  s_tr->add_option("--filters", tr.filters)->check(CLI::PositiveNumber);
  s_tr->add_option("--seed", tr.seed);
  s_tr->add_option("--epochs", tr.epochs)->check(CLI::PositiveNumber);
  s_tr->add_option("--batch-size", tr.batch_size)->check(CLI::PositiveNumber);
  s_tr->add_option("--lr", tr.lr)->check(CLI::PositiveNumber);
  s_tr->add_option("--out", tr.out)->required();

  PredictArgs pr;
  auto* s_pr = app.add_subcommand("predict", "Write class probabilities for manifest clips");
  s_pr->add_option("--checkpoint", pr.checkpoint)->required();
  s_pr->add_option("--manifest", pr.manifest)->required();
  s_pr->add_option("--features", pr.features)->required();
  s_pr->add_option("--combo", pr.combo)->required()->check(CLI::IsMember(combo_names));
  s_pr->add_option("--split", pr.split, "restrict to train|validation|test");
  s_pr->add_option("--workers", pr.workers)->check(CLI::PositiveNumber);
  s_pr->add_option("--out", pr.out)->required();

  EnsembleArgs en;
  auto* s_en = app.add_subcommand("ensemble", "Fuse prediction files");
  s_en->add_option("--predictions", en.predictions)->required()->expected(1, -1);
  s_en->add_option("--method", en.method)->check(CLI::IsMember({"sum", "prod", "owa"}));
  s_en->add_option("--owa-weights", en.weights, "comma-separated rank weights");
  s_en->add_option("--out", en.out)->required();

  EvaluateArgs ev;
  auto* s_ev = app.add_subcommand("evaluate", "Per-class accuracy report");
  s_ev->add_option("--manifest", ev.manifest)->required();
  s_ev->add_option("--decisions", ev.decisions, "NAME=PATH, repeatable")->required()->expected(1, -1);
  s_ev->add_option("--out", ev.out)->required();

  ParamsArgs pa;
  auto* s_pa = app.add_subcommand("params", "Print the parameter count of a network");
  s_pa->add_option("--filters", pa.filters)->check(CLI::PositiveNumber);
  s_pa->add_option("--in-channels", pa.in_channels)->check(CLI::Range(1, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*s_pre) return cmd_preprocess(pre);
    if (*s_tr) return cmd_train(tr);
    if (*s_pr) return cmd_predict(pr);
    if (*s_en) return cmd_ensemble(en);
    if (*s_ev) return cmd_evaluate(ev);
    if (*s_pa) return cmd_params(pa);
  } catch (const asc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (asc::is_numeric_failure(e.code())) return kExitNumeric;
    if (e.code() == asc::ErrorCode::InvalidArgument || e.code() == asc::ErrorCode::InvalidConfig) return kExitUsage;
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
