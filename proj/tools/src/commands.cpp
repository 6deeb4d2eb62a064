// Copyright 2026 The ASC Toolkit Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "asc/audio/resample.hpp"
#include "asc/audio/segment.hpp"
#include "asc/audio/wav_io.hpp"
#include "asc/cli/cli.hpp"
#include "asc/eval/fusion.hpp"
#include "asc/frontend/feature_cache.hpp"
#include "asc/frontend/feature_extractor.hpp"
#include "asc/model/network.hpp"
#include "asc/synth/synth.hpp"
#include "asc/train/trainer.hpp"

namespace asc::cli {
namespace {

namespace fs = std::filesystem;

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIOFailure, "cannot create " + path.string());
  out << text;
  if (!out) fail(ErrorCode::kIOFailure, "write failed: " + path.string());
}

model::ArchConfig arch_from(const RunConfig& c) {
  const auto& name = c.get("variant");
  model::ArchConfig arch;
  if (name == "custom") {
    const auto widths = c.get_size_list("widths");
    if (widths.size() != 4) fail(ErrorCode::kConfigError, "widths: expected 4 comma-separated channel counts");
    arch = model::make_reduced_arch(widths);
  } else {
    arch = model::make_arch(name);
  }
  const auto& pooling = c.get("pooling");
  if (pooling == "per_channel") {
    arch.pooling = model::PoolingLayout::kPerChannel;
  } else if (pooling == "flatten") {
    arch.pooling = model::PoolingLayout::kFlatten;
  } else {
    fail(ErrorCode::kConfigError, "pooling: expected per_channel or flatten");
  }
  arch.validate();
  return arch;
}

frontend::FrontendKind frontend_from(const RunConfig& c) {
  const auto kind = frontend::parse_frontend(c.get("frontend"));
  if (!kind || *kind == frontend::FrontendKind::kPower) {
    fail(ErrorCode::kConfigError, "frontend: expected logmel, cqt or gam");
  }
  return *kind;
}

train::TrainConfig train_config_from(const RunConfig& c) {
  train::TrainConfig t;
  t.batch_size = c.get_size("batch_size");
  t.epochs = c.get_size("epochs");
  t.phase1_epochs = c.get_size("phase1_epochs");
  t.lr_phase1 = c.get_double("lr_phase1");
  t.lr_phase2 = c.get_double("lr_phase2");
  t.l2_lambda = c.get_double("l2_lambda");
  t.seed = c.get_u64("seed");
  t.checkpoint_every = c.get_size("checkpoint_every");
  t.checkpoint_dir = c.get("checkpoint_dir");
  t.recalibrate_bn = c.get_bool("recalibrate_bn");
  if (t.checkpoint_every > 0 && t.checkpoint_dir.empty()) {
    fail(ErrorCode::kConfigError, "checkpoint_every needs checkpoint_dir");
  }
  try {
    t.validate();
  } catch (const Error& e) {
    fail(ErrorCode::kConfigError, e.what());
  }
  return t;
}

augment::AugmentConfig augment_config_from(const RunConfig& c) {
  augment::AugmentConfig a;
  a.mask_len = c.get_size("mask_len");
  a.n_masks_per_axis = c.get_size("masks_per_axis");
  a.mixup_alpha = c.get_double("mixup_alpha");
  const auto& dist = c.get("mixup_dist");
  if (dist == "beta") {
    a.mixup_dist = augment::MixupDist::kBeta;
  } else if (dist == "uniform") {
    a.mixup_dist = augment::MixupDist::kUniform;
  } else {
    fail(ErrorCode::kConfigError, "mixup_dist: expected beta or uniform");
  }
  a.rng_seed = c.get_u64("seed");
  return a;
}

struct Paths {
  std::string out, manifest, cache, weights, history, report, report_csv, name;
  std::vector<std::string> inputs;
  bool csv = false;
};

int cmd_synth(const RunConfig& c, const Paths& p, std::ostream& out) {
  synth::DatasetConfig d;
  d.n_per_class = c.get_size("n_per_class");
  d.n_eval_per_class = c.get_size("n_eval_per_class");
  d.train_devices = c.get_list("train_devices");
  d.eval_devices = c.get_list("eval_devices");
  d.duration_s = c.get_double("duration_s");
  d.seed = c.get_u64("seed");
  for (const auto& dev : d.train_devices) synth::device_preset(dev);
  for (const auto& dev : d.eval_devices) synth::device_preset(dev);
  const auto rows = synth::make_dataset(d, p.out);
  out << "wrote " << rows.size() << " clips and " << (fs::path(p.out) / "manifest.csv").string() << "\n";
  return kExitOk;
}

int cmd_features(const RunConfig& c, const Paths& p, std::ostream& out) {
  const auto kind = frontend_from(c);
  const auto& split = c.get("split");
  if (split != "all" && split != "train" && split != "eval") fail(ErrorCode::kConfigError, "split: expected train, eval or all");
  const auto rows = synth::read_manifest(p.manifest);
  const fs::path base = fs::path(p.manifest).parent_path();

  frontend::FeatureExtractor fx;
  frontend::FeatureCache cache;
  cache.kind = kind;
  cache.freq = static_cast<std::uint32_t>(fx.config().n_bands);
  cache.time = static_cast<std::uint32_t>(fx.config().target_frames);
  cache.channels = 3;
  for (const auto& r : rows) {
    if (split != "all" && r.split != split) continue;
    auto clip = audio::load_wav(base / r.path);
    if (clip.sample_rate != audio::kPipelineRate) clip = audio::resample_to_32k(clip);
    clip.scene_label = r.scene_label;
    clip.device_id = r.device_id;
    audio::validate(clip);
    for (const auto& seg : audio::segment_10s(clip)) {
      cache.records.push_back({r.scene_label, r.device_id, fx.extract(seg, kind)});
    }
  }
  if (cache.records.empty()) fail(ErrorCode::kValidationError, "no manifest rows match split '" + split + "'");
  frontend::write_feature_cache(p.out, cache);
  out << "wrote " << cache.records.size() << " records (" << cache.freq << "x" << cache.time << "x"
      << cache.channels << ", " << frontend::to_string(kind) << ") to " << p.out << "\n";
  return kExitOk;
}

int cmd_train(const RunConfig& c, const Paths& p, std::ostream& out, std::ostream& err) {
  const auto arch = arch_from(c);
  const auto tc = train_config_from(c);
  const auto ac = augment_config_from(c);
  const std::size_t max_steps = c.get_size("max_steps");
  const auto data = train::from_cache(frontend::read_feature_cache(p.cache), arch.n_classes);

  model::Network net(arch, tc.seed);
  const std::size_t per_epoch = (data.size() + tc.batch_size - 1) / tc.batch_size;
  double loss_sum = 0.0, acc_sum = 0.0;
  std::size_t in_epoch = 0;
  const auto result = train::fit(net, data, tc, ac, [&](const train::StepInfo& s) {
    loss_sum += s.loss;
    acc_sum += s.accuracy;
    if (++in_epoch == per_epoch) {
      char line[160];
      std::snprintf(line, sizeof line, "epoch %zu lr %.3g loss %.5f batch_acc %.4f\n", s.epoch, s.lr,
                    loss_sum / static_cast<double>(in_epoch), acc_sum / static_cast<double>(in_epoch));
      err << line << std::flush;
      loss_sum = acc_sum = 0.0;
      in_epoch = 0;
    }
    return max_steps == 0 || s.step + 1 < max_steps;
  });
  net.save(p.out);
  fs::path history = p.history;
  if (history.empty()) history = fs::path(p.out).replace_extension(".history.csv");
  train::write_history_csv(history, result.history);
  out << "trained " << model::to_string(arch.variant) << " for " << result.steps << " steps on " << data.size()
      << " samples; weights " << p.out << ", history " << history.string() << "\n";
  return kExitOk;
}

std::string system_name(const std::string& path) { return fs::path(path).stem().string(); }

void emit_report(const eval::EvalReport& rep, const std::string& title, const Paths& p, std::ostream& out) {
  const std::string text = eval::report_text(rep, title);
  out << text;
  if (!p.report.empty()) write_text(p.report, text);
  if (!p.report_csv.empty()) write_text(p.report_csv, eval::report_csv(rep));
}

int cmd_eval(const RunConfig& c, const Paths& p, std::ostream& out) {
  const auto arch = arch_from(c);
  const auto data = train::from_cache(frontend::read_feature_cache(p.cache), arch.n_classes);
  auto net = model::Network::uninitialized(arch);
  net.load(p.weights);
  const auto probs = train::predict_set(net, data, c.get_size("eval_batch"));

  const std::size_t M = arch.n_classes;
  std::vector<eval::PredictionRow> rows(data.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].sample_id = std::to_string(i);
    rows[i].device_id = data.devices[i];
    rows[i].true_label = data.labels[i];
    rows[i].probs.assign(probs.begin() + static_cast<std::ptrdiff_t>(i * M),
                         probs.begin() + static_cast<std::ptrdiff_t>((i + 1) * M));
  }
  eval::write_predictions(p.out, rows);
  // The report is computed from the rows as written, so fusing this file
  // alone reproduces it.
  const std::string name = p.name.empty() ? system_name(p.out) : p.name;
  const auto aligned = eval::align_systems({eval::read_predictions(p.out)}, {name});
  emit_report(eval::fuse_and_eval(aligned.pm, aligned.truth, aligned.devices), name, p, out);
  return kExitOk;
}

int cmd_fuse(const Paths& p, std::ostream& out) {
  std::vector<std::vector<eval::PredictionRow>> systems;
  std::vector<std::string> names;
  for (const auto& in : p.inputs) {
    systems.push_back(eval::read_predictions(in));
    names.push_back(system_name(in));
  }
  const auto aligned = eval::align_systems(systems, names);
  std::string title;
  for (const auto& n : names) title += (title.empty() ? "" : "+") + n;
  emit_report(eval::fuse_and_eval(aligned.pm, aligned.truth, aligned.devices), title, p, out);
  return kExitOk;
}

int cmd_params(const RunConfig& c, const Paths& p, std::ostream& out) {
  const auto arch = arch_from(c);
  const auto net = model::Network::uninitialized(arch);
  const auto& spec = net.spec();
  out << (p.csv ? model::summary_csv(spec) : model::summary_text(spec));
  const std::size_t total = model::count_parameters(spec);
  if (const auto target = model::published_param_count(arch.variant)) {
    const double dev = 100.0 * (static_cast<double>(total) - *target) / *target;
    char line[160];
    std::snprintf(line, sizeof line, "published: %.1fM  deviation: %+.2f%%  within 15%%: %s\n", *target / 1e6, dev,
                  std::abs(dev) <= 15.0 ? "yes" : "no");
    out << line;
  }
  return kExitOk;
}

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Acoustic scene classification toolkit", "asc"};
  app.require_subcommand(1);

  std::string config_path;
  Paths paths;
  std::map<std::string, std::string> flag_values;
  std::map<std::string, std::map<std::string, CLI::Option*>> flag_opts;
  std::map<std::string, std::vector<std::string>> cmd_keys;
  std::map<std::string, const KeySpec*> spec_of;
  for (const auto& k : config_keys()) spec_of[k.key] = &k;

  auto add_command = [&](const std::string& name, const std::string& help, std::vector<std::string> keys) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--config", config_path, "key = value config file; flags override it");
    for (const auto& k : keys) {
      flag_opts[name][k] = sc->add_option(flag_name(k), flag_values[k], spec_of.at(k)->help + " (default " +
                                                                            (spec_of.at(k)->default_value.empty() ? "none" : spec_of.at(k)->default_value) + ")");
    }
    cmd_keys[name] = std::move(keys);
    return sc;
  };
  const std::vector<std::string> arch_keys{"variant", "widths", "pooling"};
  auto concat = [](std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };

  auto* synth = add_command("synth", "generate the seeded synthetic corpus and its manifest",
                            {"seed", "n_per_class", "n_eval_per_class", "train_devices", "eval_devices", "duration_s"});
  synth->add_option("--out", paths.out, "output directory")->required();

  auto* features = add_command("features", "compute a feature cache from a manifest", {"frontend", "split"});
  features->add_option("--manifest", paths.manifest, "manifest.csv")->required();
  features->add_option("--out", paths.out, "output .ascf cache")->required();

  auto* train = add_command("train", "train a network on a feature cache",
                            concat(arch_keys, {"seed", "batch_size", "epochs", "phase1_epochs", "lr_phase1", "lr_phase2",
                                               "l2_lambda", "max_steps", "checkpoint_every", "checkpoint_dir", "recalibrate_bn", "mask_len",
                                               "masks_per_axis", "mixup_alpha", "mixup_dist"}));
  train->add_option("--cache", paths.cache, "training feature cache")->required();
  train->add_option("--out", paths.out, "output weights (.ascw)")->required();
  train->add_option("--history", paths.history, "per-epoch history CSV (default <out>.history.csv)");

  auto* eval = add_command("eval", "predict a feature cache and report per-device accuracy", concat(arch_keys, {"eval_batch"}));
  eval->add_option("--cache", paths.cache, "evaluation feature cache")->required();
  eval->add_option("--weights", paths.weights, "trained weights (.ascw)")->required();
  eval->add_option("--out", paths.out, "output prediction CSV")->required();
  eval->add_option("--name", paths.name, "system name in the report (default: stem of --out)");
  eval->add_option("--report", paths.report, "also write the text report here");
  eval->add_option("--report-csv", paths.report_csv, "also write the CSV report here");

  auto* fuse = add_command("fuse", "PROD-fuse prediction CSVs and report per-device accuracy", {});
  fuse->add_option("predictions", paths.inputs, "prediction CSVs, one per system")->required();
  fuse->add_option("--report", paths.report, "also write the text report here");
  fuse->add_option("--report-csv", paths.report_csv, "also write the CSV report here");

  auto* params = add_command("params", "print the layer table and parameter count of a variant", arch_keys);
  params->add_flag("--csv", paths.csv, "layer table as CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error[ConfigError]: " << one_line(e.what()) << "\n";
    return kExitConfig;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    RunConfig cfg;
    if (!config_path.empty()) apply_config_file(cfg, config_path);
    for (const auto& [key, opt] : flag_opts[cmd]) {
      if (opt->count() > 0) cfg.set(key, flag_values[key]);
    }
    err << "# asc " << cmd << " resolved config\n" << cfg.dump(cmd_keys[cmd]) << std::flush;

    if (cmd == "synth") return cmd_synth(cfg, paths, out);
    if (cmd == "features") return cmd_features(cfg, paths, out);
    if (cmd == "train") return cmd_train(cfg, paths, out, err);
    if (cmd == "eval") return cmd_eval(cfg, paths, out);
    if (cmd == "fuse") return cmd_fuse(paths, out);
    return cmd_params(cfg, paths, out);
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << one_line(e.what()) << "\n";
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error[IOFailure]: " << one_line(e.what()) << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error[ValidationError]: " << one_line(e.what()) << "\n";
    return kExitValidation;
  }
}

}  // namespace asc::cli
