// hais - hierarchical aggregation engine for 3D point-cloud instance
// segmentation. Subcommands: cluster, eval, synth, class-radii, loss-check,
// bench.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hais/errors.hpp"
#include "hais/eval.hpp"
#include "hais/io.hpp"
#include "hais/losses.hpp"
#include "hais/pipeline.hpp"
#include "hais/synth.hpp"

namespace fs = std::filesystem;
using namespace hais;

namespace {

std::unordered_set<ClassId> parse_class_set(const std::string& csv) {
  std::unordered_set<ClassId> out;
  std::string token;
  std::istringstream is(csv);
  while (std::getline(is, token, ',')) {
    if (token.empty()) {
      continue;
    }
    out.insert(static_cast<ClassId>(std::stol(token)));
  }
  if (out.empty()) {
    throw ConfigError("background class list is empty");
  }
  return out;
}

/// HAIS_THREADS overrides whatever --threads or the config said.
int effective_threads(int flag_value) {
  if (const char* env = std::getenv("HAIS_THREADS")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError(std::string("invalid HAIS_THREADS value '") + env + "'");
    }
  }
  return flag_value;
}

struct ClusterArgs {
  std::string cloud_path;
  std::string preds_path;
  std::string out_dir;
  std::string scene_name;
  std::string config_path;
  std::string class_radii_path;
  std::string coord_space = "shifted";
  std::string mask_provider = "auto";
  double r_point = 0.03;
  double alpha = 0.01;
  std::size_t primary_threshold = 100;
  std::size_t min_points = 100;
  double mask_threshold = 0.5;
  double mask_scale = 2.0;
  std::string background_classes = "0";
  int threads = 1;
  bool no_set_aggregation = false;
};

/// Config-file values fill in every option the command line left untouched.
void merge_config(const CLI::App& app, const std::string& config_path, ClusterArgs& args) {
  if (config_path.empty()) {
    return;
  }
  const auto config = load_config_file(config_path);
  const auto unset = [&app](const std::string& flag) { return app.count(flag) == 0; };
  const auto get = [&config](const char* key) -> const std::string* {
    auto it = config.find(key);
    return it == config.end() ? nullptr : &it->second;
  };
  if (const auto* v = get("r_point"); v && unset("--r-point")) {
    args.r_point = std::stod(*v);
  }
  if (const auto* v = get("alpha"); v && unset("--alpha")) {
    args.alpha = std::stod(*v);
  }
  if (const auto* v = get("primary_threshold"); v && unset("--primary-threshold")) {
    args.primary_threshold = static_cast<std::size_t>(std::stoull(*v));
  }
  if (const auto* v = get("min_points"); v && unset("--min-points")) {
    args.min_points = static_cast<std::size_t>(std::stoull(*v));
  }
  if (const auto* v = get("mask_threshold"); v && unset("--mask-threshold")) {
    args.mask_threshold = std::stod(*v);
  }
  if (const auto* v = get("mask_scale"); v && unset("--mask-scale")) {
    args.mask_scale = std::stod(*v);
  }
  if (const auto* v = get("coord_space"); v && unset("--coord-space")) {
    args.coord_space = *v;
  }
  if (const auto* v = get("background_classes"); v && unset("--background-classes")) {
    args.background_classes = *v;
  }
  if (const auto* v = get("threads"); v && unset("--threads")) {
    args.threads = std::stoi(*v);
  }
  if (const auto* v = get("class_radii"); v && unset("--class-radii")) {
    args.class_radii_path = *v;
  }
  if (const auto* v = get("set_aggregation"); v && unset("--no-set-aggregation")) {
    args.no_set_aggregation = (*v == "false" || *v == "0" || *v == "off");
  }
}

int run_cluster(const CLI::App& app, ClusterArgs args) {
  merge_config(app, args.config_path, args);

  PipelineOptions options;
  options.config.r_point = args.r_point;
  options.config.alpha = args.alpha;
  options.config.primary_size_threshold = args.primary_threshold;
  options.config.min_final_points = args.min_points;
  options.config.mask_threshold = args.mask_threshold;
  options.background_classes = parse_class_set(args.background_classes);
  options.use_set_aggregation = !args.no_set_aggregation;
  options.threads = effective_threads(args.threads);
  if (args.coord_space == "shifted") {
    options.coord_space = CoordSpace::kShifted;
  } else if (args.coord_space == "original") {
    options.coord_space = CoordSpace::kOriginal;
  } else {
    throw ConfigError("--coord-space must be 'shifted' or 'original'");
  }
  if (!args.class_radii_path.empty()) {
    options.config.class_radii = load_class_radii(args.class_radii_path);
  }

  const PointCloud cloud = load_cloud(args.cloud_path);
  const PredictionFile preds = load_predictions(args.preds_path, cloud);

  // Refinement source: replayed file masks when present, otherwise the
  // geometric heuristic; 'oracle' replays ground truth (requires GT labels).
  std::unique_ptr<MaskProvider> provider;
  std::string provider_name = args.mask_provider;
  if (provider_name == "auto") {
    provider_name = preds.has_replay() ? "file" : "heuristic";
  }
  PipelineResult result;
  if (provider_name == "heuristic") {
    provider = std::make_unique<HeuristicMaskProvider>(args.mask_scale);
    result = run_pipeline(cloud, preds.prediction, options, *provider);
  } else if (provider_name == "oracle") {
    provider = std::make_unique<OracleMaskProvider>(gt_instances(cloud));
    result = run_pipeline(cloud, preds.prediction, options, *provider);
  } else if (provider_name == "file") {
    if (!preds.has_replay()) {
      throw InputError("prediction file has no INSTANCE sections to replay");
    }
    // Replay entries are keyed by the aggregation output, which we need
    // first; run the aggregation stages via a throwaway all-ones provider to
    // discover the clusters, then refine with the replayed masks.
    struct PassThrough : MaskProvider {
      MaskScore evaluate(const PointCloud&, const Cluster& c) const override {
        MaskScore ms;
        ms.mask.probabilities.assign(c.size(), 1.0);
        ms.score = 1.0;
        return ms;
      }
    };
    const PassThrough discover;
    PipelineResult probe = run_pipeline(cloud, preds.prediction, options, discover);
    const ReplayMaskProvider replay(preds.replay, probe.aggregated);
    result = run_pipeline(cloud, preds.prediction, options, replay);
  } else {
    throw ConfigError("--mask-provider must be auto, heuristic, file, or oracle");
  }

  const std::string name =
      args.scene_name.empty() ? fs::path(args.cloud_path).stem().string() : args.scene_name;
  export_results(result.instances, cloud.size(), args.out_dir, name);

  std::cout << "points " << cloud.size() << "\n"
            << "preliminary_clusters " << result.preliminary.size() << "\n"
            << "aggregated_instances " << result.aggregated.size() << "\n"
            << "absorbed_fragments " << result.absorbed_count << "\n"
            << "unabsorbed_fragments " << result.unabsorbed.size() << "\n"
            << "dropped_empty " << result.dropped_empty << "\n"
            << "dropped_small " << result.dropped_small << "\n"
            << "final_instances " << result.instances.size() << "\n"
            << "index_file " << (fs::path(args.out_dir) / (name + ".txt")).string() << "\n";
  for (ClassId cls : result.missing_radius_classes) {
    std::cerr << "warning: no class radius for class " << cls << ", size term only\n";
  }
  return 0;
}

int run_eval(const std::string& cloud_path, const std::string& results_path,
             const std::string& out_path) {
  const PointCloud cloud = load_cloud(cloud_path);
  if (!cloud.has_gt()) {
    throw InputError("eval: the cloud file carries no ground-truth labels");
  }
  const auto exported = parse_results(results_path, cloud.size());
  const auto preds = exported_as_scored(exported, cloud.positions);
  const EvalReport report = evaluate(preds, gt_instances(cloud));
  std::cout << format_report(report);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      throw IoError("cannot write " + out_path);
    }
    out << report_key_values(report);
  }
  return 0;
}

int run_synth(const std::string& spec_path, const std::string& out_dir, long long count_flag) {
  const auto config = load_config_file(spec_path);
  const SceneSpec spec = scene_spec_from_config(config);
  long long count = count_flag;
  if (count <= 0) {
    const auto it = config.find("scenes");
    count = it == config.end() ? 1 : std::stoll(it->second);
  }
  if (count <= 0) {
    throw ConfigError("scene count must be positive");
  }
  std::string emit = "none";
  if (const auto it = config.find("emit_predictions"); it != config.end()) {
    emit = it->second;
  }
  if (emit != "none" && emit != "oracle" && emit != "degraded") {
    throw ConfigError("emit_predictions must be none, oracle, or degraded");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create " + out_dir);
  }
  for (long long i = 0; i < count; ++i) {
    const PointCloud cloud = generate_scene(spec, static_cast<std::uint64_t>(i));
    char name[64];
    std::snprintf(name, sizeof(name), "scene_%03lld", i);
    write_cloud(cloud, fs::path(out_dir) / (std::string(name) + ".cloud"));
    if (emit != "none") {
      PerPointPrediction pred = oracle_predictions(cloud, spec.background_class);
      if (emit == "degraded") {
        NoiseSpec noise = noise_spec_from_config(config);
        noise.seed = noise.seed ^ static_cast<std::uint64_t>(i);
        pred = degrade_predictions(pred, noise);
      }
      write_predictions(pred, fs::path(out_dir) / (std::string(name) + ".pred"));
    }
    std::cout << name << " points " << cloud.size() << "\n";
  }
  return 0;
}

int run_class_radii(const std::vector<std::string>& cloud_paths, const std::string& out_path,
                    const std::string& stat_name) {
  RadiusStatistic stat = RadiusStatistic::kMeanDistance;
  if (stat_name == "rms") {
    stat = RadiusStatistic::kRmsDistance;
  } else if (stat_name == "max") {
    stat = RadiusStatistic::kMaxDistance;
  } else if (stat_name != "mean") {
    throw ConfigError("--stat must be mean, rms, or max");
  }
  std::vector<PointCloud> corpus;
  corpus.reserve(cloud_paths.size());
  for (const std::string& path : cloud_paths) {
    corpus.push_back(load_cloud(path));
  }
  const ClassRadii radii = compute_class_radii(corpus, stat);
  if (out_path.empty()) {
    for (const auto& [cls, r] : radii.entries()) {
      std::cout << cls << "\t" << format_value(r) << "\n";
    }
  } else {
    write_class_radii(radii, out_path);
    std::cout << "wrote " << radii.size() << " class radii to " << out_path << "\n";
  }
  return 0;
}

// --- loss-check: finite-difference verification of the loss gradients -----

struct FdCheck {
  std::string name;
  int failures = 0;
  int trials = 0;
  double worst = 0.0;
};

double fd_slope(const std::function<double(double)>& f, double x, double step = 1e-5) {
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

bool close(double analytic, double numeric, double rel = 1e-4, double abs_tol = 1e-4) {
  const double diff = std::abs(analytic - numeric);
  return diff <= abs_tol || diff <= rel * std::max(std::abs(analytic), std::abs(numeric));
}

int run_loss_check(int trials, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::uniform_real_distribution<double> wide(-2.0, 2.0);
  std::vector<FdCheck> checks;

  {
    FdCheck check{"shift_loss"};
    for (int t = 0; t < trials; ++t) {
      ShiftLossInput input;
      const std::size_t n = 20;
      input.gt_shift.resize(n);
      input.pred_shift.resize(n);
      input.is_foreground.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        input.gt_shift[i] = {wide(rng), wide(rng), wide(rng)};
        input.pred_shift[i] = {wide(rng), wide(rng), wide(rng)};
        input.is_foreground[i] = (rng() % 4) != 0;
      }
      bool kink = false;
      for (std::size_t i = 0; i < n && !kink; ++i) {
        if (!input.is_foreground[i]) {
          continue;
        }
        const Vec3 d = input.gt_shift[i] - input.pred_shift[i];
        kink = std::abs(d.x) < 2e-5 || std::abs(d.y) < 2e-5 || std::abs(d.z) < 2e-5;
      }
      if (kink) {
        --t;
        continue;
      }
      const auto result = shift_loss(input);
      ++check.trials;
      const std::size_t i = rng() % n;
      const int axis = static_cast<int>(rng() % 3);
      const auto value_of = [&input, i, axis](double v) {
        ShiftLossInput local = input;
        Vec3& p = local.pred_shift[i];
        (axis == 0 ? p.x : axis == 1 ? p.y : p.z) = v;
        return shift_loss(local).loss;
      };
      const Vec3& g = result.grad[i];
      const double analytic = axis == 0 ? g.x : axis == 1 ? g.y : g.z;
      const double base = axis == 0 ? input.pred_shift[i].x
                          : axis == 1 ? input.pred_shift[i].y
                                      : input.pred_shift[i].z;
      const double numeric = fd_slope(value_of, base);
      check.worst = std::max(check.worst, std::abs(analytic - numeric));
      if (!close(analytic, numeric)) {
        ++check.failures;
      }
    }
    checks.push_back(check);
  }

  {
    FdCheck check{"mask_loss"};
    for (int t = 0; t < trials; ++t) {
      std::vector<MaskLossInput> inputs(2);
      for (auto& inst : inputs) {
        inst.iou = unit(rng) > 0.5 ? 0.8 : 0.3;
        inst.probabilities.resize(8);
        inst.labels.resize(8);
        for (std::size_t j = 0; j < 8; ++j) {
          inst.probabilities[j] = unit(rng);
          inst.labels[j] = static_cast<std::uint8_t>(rng() % 2);
        }
      }
      inputs[0].iou = 0.8;  // keep at least one qualifying instance
      const auto result = mask_loss(inputs);
      ++check.trials;
      const std::size_t j = rng() % 8;
      const auto value_of = [&inputs, j](double v) {
        auto local = inputs;
        local[0].probabilities[j] = v;
        return mask_loss(local).loss;
      };
      const double analytic = result.grads[0][j];
      const double numeric = fd_slope(value_of, inputs[0].probabilities[j]);
      check.worst = std::max(check.worst, std::abs(analytic - numeric));
      if (!close(analytic, numeric)) {
        ++check.failures;
      }
    }
    checks.push_back(check);
  }

  {
    FdCheck check{"score_loss"};
    for (int t = 0; t < trials; ++t) {
      std::vector<ScoreLossInput> inputs(6);
      for (auto& in : inputs) {
        in.predicted_score = unit(rng);
        in.target_iou = unit(rng);
      }
      const auto result = score_loss(inputs);
      ++check.trials;
      const std::size_t i = rng() % inputs.size();
      const auto value_of = [&inputs, i](double v) {
        auto local = inputs;
        local[i].predicted_score = v;
        return score_loss(local).loss;
      };
      const double numeric = fd_slope(value_of, inputs[i].predicted_score);
      check.worst = std::max(check.worst, std::abs(result.grad[i] - numeric));
      if (!close(result.grad[i], numeric)) {
        ++check.failures;
      }
    }
    checks.push_back(check);
  }

  {
    FdCheck check{"semantic_ce_loss"};
    for (int t = 0; t < trials; ++t) {
      const std::size_t n = 6;
      const int c = 4;
      std::vector<double> logits(n * c);
      std::vector<ClassId> labels(n);
      for (double& v : logits) {
        v = wide(rng);
      }
      for (ClassId& l : labels) {
        l = static_cast<ClassId>(rng() % c);
      }
      const auto result = semantic_ce_loss(logits, c, labels);
      ++check.trials;
      const std::size_t k = rng() % logits.size();
      const auto value_of = [&logits, c, &labels, k](double v) {
        auto local = logits;
        local[k] = v;
        return semantic_ce_loss(local, c, labels).loss;
      };
      const double numeric = fd_slope(value_of, logits[k]);
      check.worst = std::max(check.worst, std::abs(result.grad[k] - numeric));
      if (!close(result.grad[k], numeric)) {
        ++check.failures;
      }
    }
    checks.push_back(check);
  }

  // Stationarity of the score loss at score == iou.
  {
    FdCheck check{"score_loss stationarity"};
    for (int t = 0; t < trials; ++t) {
      const double iou = unit(rng);
      const std::vector<ScoreLossInput> inputs = {{iou, iou}};
      ++check.trials;
      const double g = score_loss(inputs).grad[0];
      check.worst = std::max(check.worst, std::abs(g));
      if (std::abs(g) > 1e-6) {
        ++check.failures;
      }
    }
    checks.push_back(check);
  }

  int failures = 0;
  for (const FdCheck& check : checks) {
    failures += check.failures;
    std::printf("%-24s %3d/%3d ok   worst abs dev %.3e\n", check.name.c_str(),
                check.trials - check.failures, check.trials, check.worst);
  }
  if (failures > 0) {
    std::cerr << failures << " gradient check(s) failed\n";
    return 1;
  }
  std::cout << "all gradient checks passed\n";
  return 0;
}

int run_bench(std::size_t target_points, std::uint64_t seed, int threads) {
  using Clock = std::chrono::steady_clock;
  threads = effective_threads(threads);

  // Build a stressed scene: several large instances with noisy predictions,
  // sized so the cloud reaches roughly target_points.
  SceneSpec spec;
  spec.seed = seed;
  const std::size_t per_instance = std::max<std::size_t>(500, target_points / 12);
  spec.min_instances = 10;
  spec.max_instances = 10;
  spec.class_sizes = {{1, {per_instance, per_instance}},
                      {2, {per_instance, per_instance}},
                      {3, {per_instance, per_instance}}};
  spec.extent = 12.0;
  spec.background_fraction = 0.15;

  const auto t0 = Clock::now();
  const PointCloud cloud = generate_scene(spec);
  NoiseSpec noise;
  noise.shift_noise_sigma = 0.03;
  noise.shift_dropout_fraction = 0.2;
  noise.seed = seed;
  const PerPointPrediction pred = degrade_predictions(oracle_predictions(cloud), noise);
  const double predict_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  PipelineOptions options;
  options.threads = threads;
  options.config.class_radii = compute_class_radii(std::span<const PointCloud>(&cloud, 1));
  const HeuristicMaskProvider provider(2.0);
  const PipelineResult result = run_pipeline(cloud, pred, options, provider);

  const double total_ms = predict_ms + result.timings.total_ms;
  const double stage_sum = predict_ms + result.timings.point_aggregation_ms +
                           result.timings.set_aggregation_ms + result.timings.refine_ms;
  std::printf("points                     %zu\n", cloud.size());
  std::printf("threads                    %d\n", threads);
  std::printf("point-wise prediction  ms  %.3f\n", predict_ms);
  std::printf("point aggregation      ms  %.3f\n", result.timings.point_aggregation_ms);
  std::printf("set aggregation        ms  %.3f\n", result.timings.set_aggregation_ms);
  std::printf("intra-instance pred.   ms  %.3f\n", result.timings.refine_ms);
  std::printf("total                  ms  %.3f\n", total_ms);
  std::printf("stage sum              ms  %.3f (%.1f%% of total)\n", stage_sum,
              100.0 * stage_sum / total_ms);
  std::printf("final instances            %zu\n", result.instances.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hierarchical aggregation engine for 3D point-cloud instance segmentation"};
  app.require_subcommand(1);

  // cluster
  ClusterArgs cluster_args;
  CLI::App* cluster = app.add_subcommand("cluster", "cluster a cloud given per-point predictions");
  cluster->add_option("--cloud", cluster_args.cloud_path, "input cloud file")->required();
  cluster->add_option("--preds", cluster_args.preds_path, "per-point prediction file")->required();
  cluster->add_option("--out-dir", cluster_args.out_dir, "output directory")->required();
  cluster->add_option("--scene-name", cluster_args.scene_name, "output name (default: cloud stem)");
  cluster->add_option("--config", cluster_args.config_path, "key = value config file");
  cluster->add_option("--r-point", cluster_args.r_point, "point aggregation bandwidth (m)");
  cluster->add_option("--alpha", cluster_args.alpha, "size-bandwidth coefficient");
  cluster->add_option("--primary-threshold", cluster_args.primary_threshold,
                      "primary/fragment size split");
  cluster->add_option("--min-points", cluster_args.min_points, "final instance size filter");
  cluster->add_option("--mask-threshold", cluster_args.mask_threshold, "mask binarization");
  cluster->add_option("--mask-scale", cluster_args.mask_scale, "heuristic mask falloff scale");
  cluster->add_option("--class-radii", cluster_args.class_radii_path, "class radii table file");
  cluster->add_option("--coord-space", cluster_args.coord_space, "shifted|original");
  cluster->add_option("--background-classes", cluster_args.background_classes,
                      "comma-separated background class ids");
  cluster->add_option("--threads", cluster_args.threads, "worker threads (HAIS_THREADS overrides)");
  cluster->add_option("--mask-provider", cluster_args.mask_provider,
                      "auto|heuristic|file|oracle");
  cluster->add_flag("--no-set-aggregation", cluster_args.no_set_aggregation,
                    "skip fragment absorption");

  // eval
  std::string eval_cloud, eval_results, eval_out;
  CLI::App* eval_cmd = app.add_subcommand("eval", "score exported results against ground truth");
  eval_cmd->add_option("--cloud", eval_cloud, "ground-truth cloud file")->required();
  eval_cmd->add_option("--results", eval_results, "exported index file")->required();
  eval_cmd->add_option("--out", eval_out, "write key = value report here");

  // synth
  std::string synth_spec, synth_out;
  long long synth_count = 0;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate synthetic labeled scenes");
  synth_cmd->add_option("--spec", synth_spec, "scene spec file (key = value)")->required();
  synth_cmd->add_option("--out-dir", synth_out, "output directory")->required();
  synth_cmd->add_option("--count", synth_count, "number of scenes (overrides 'scenes' key)");

  // class-radii
  std::vector<std::string> radii_clouds;
  std::string radii_out, radii_stat = "mean";
  CLI::App* radii_cmd =
      app.add_subcommand("class-radii", "compute per-class instance radii from a GT corpus");
  radii_cmd->add_option("clouds", radii_clouds, "ground-truth cloud files")->required();
  radii_cmd->add_option("--out", radii_out, "output table (stdout when absent)");
  radii_cmd->add_option("--stat", radii_stat, "radius statistic: mean|rms|max");

  // loss-check
  int loss_trials = 50;
  std::uint64_t loss_seed = 1;
  CLI::App* loss_cmd =
      app.add_subcommand("loss-check", "verify loss gradients against finite differences");
  loss_cmd->add_option("--trials", loss_trials, "random trials per loss");
  loss_cmd->add_option("--seed", loss_seed, "rng seed");

  // bench
  std::size_t bench_points = 100000;
  std::uint64_t bench_seed = 1;
  int bench_threads = 1;
  CLI::App* bench_cmd = app.add_subcommand("bench", "per-stage timing on a synthetic scene");
  bench_cmd->add_option("--points", bench_points, "approximate point count");
  bench_cmd->add_option("--seed", bench_seed, "scene seed");
  bench_cmd->add_option("--threads", bench_threads, "worker threads (HAIS_THREADS overrides)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cluster->parsed()) {
      return run_cluster(*cluster, cluster_args);
    }
    if (eval_cmd->parsed()) {
      return run_eval(eval_cloud, eval_results, eval_out);
    }
    if (synth_cmd->parsed()) {
      return run_synth(synth_spec, synth_out, synth_count);
    }
    if (radii_cmd->parsed()) {
      return run_class_radii(radii_clouds, radii_out, radii_stat);
    }
    if (loss_cmd->parsed()) {
      return run_loss_check(loss_trials, loss_seed);
    }
    if (bench_cmd->parsed()) {
      return run_bench(bench_points, bench_seed, bench_threads);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
