#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "hais/io.hpp"

using namespace hais;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hais_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct RunResult {
  int status = -1;
  std::string output;
};

/// Runs the CLI with stdout+stderr captured.
RunResult run(const std::string& args, const std::string& env = "") {
  static const std::string binary = HAIS_CLI_PATH;
  const fs::path capture =
      fs::temp_directory_path() / ("hais_out_" + std::to_string(std::random_device{}()));
  const std::string command =
      env + (env.empty() ? "" : " ") + binary + " " + args + " > " + capture.string() + " 2>&1";
  RunResult result;
  const int raw = std::system(command.c_str());
  result.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(capture);
  std::stringstream buffer;
  buffer << in.rdbuf();
  result.output = buffer.str();
  fs::remove(capture);
  return result;
}

void write_spec(const fs::path& path, const std::string& extra = "") {
  std::ofstream out(path);
  out << "instances_min = 3\n"
         "instances_max = 4\n"
         "class_sizes = 1:150:300 2:150:300\n"
         "extent = 6\n"
         "background_fraction = 0.15\n"
         "seed = 11\n"
      << extra;
}

}  // namespace

TEST_CASE("synth writes scenes and oracle predictions") {
  TempDir tmp;
  write_spec(tmp.path / "spec.conf", "scenes = 2\nemit_predictions = oracle\n");
  const RunResult result =
      run("synth --spec " + (tmp.path / "spec.conf").string() + " --out-dir " +
          (tmp.path / "scenes").string());
  CHECK(result.status == 0);
  CHECK(fs::exists(tmp.path / "scenes" / "scene_000.cloud"));
  CHECK(fs::exists(tmp.path / "scenes" / "scene_000.pred"));
  CHECK(fs::exists(tmp.path / "scenes" / "scene_001.cloud"));
  // Should load back cleanly.
  const PointCloud cloud = load_cloud(tmp.path / "scenes" / "scene_000.cloud");
  CHECK(cloud.has_gt());
}

TEST_CASE("cluster then eval on oracle predictions reaches AP 1.0") {
  TempDir tmp;
  write_spec(tmp.path / "spec.conf", "scenes = 1\nemit_predictions = oracle\n");
  REQUIRE(run("synth --spec " + (tmp.path / "spec.conf").string() + " --out-dir " +
              (tmp.path / "s").string())
              .status == 0);
  const std::string cloud = (tmp.path / "s" / "scene_000.cloud").string();
  const std::string preds = (tmp.path / "s" / "scene_000.pred").string();
  const RunResult cluster = run("cluster --cloud " + cloud + " --preds " + preds +
                                " --out-dir " + (tmp.path / "out").string() +
                                " --mask-provider oracle");
  CHECK(cluster.status == 0);
  CHECK(cluster.output.find("final_instances") != std::string::npos);

  const RunResult eval = run("eval --cloud " + cloud + " --results " +
                             (tmp.path / "out" / "scene_000.txt").string() + " --out " +
                             (tmp.path / "report.txt").string());
  CHECK(eval.status == 0);
  const auto report = load_config_file(tmp.path / "report.txt");
  CHECK(report.at("ap50") == "1");
  CHECK(report.at("ap25") == "1");
  CHECK(report.at("mcov") == "1");
  CHECK(report.at("mprec") == "1");
  CHECK(report.at("mrec") == "1");
}

TEST_CASE("--no-set-aggregation yields more instances on a fragmenting scene") {
  TempDir tmp;
  // Large dense instances + dropout noise: fragments split off and only set
  // aggregation folds them back.
  write_spec(tmp.path / "spec.conf",
             "scenes = 1\n"
             "class_sizes = 1:2500:3000 2:2500:3000\n"
             "scale_min = 0.5\n"
             "scale_max = 0.6\n"
             "extent = 8\n"
             "emit_predictions = degraded\n"
             "noise_sigma = 0.01\n"
             "noise_dropout = 0.5\n"
             "noise_seed = 3\n");
  REQUIRE(run("synth --spec " + (tmp.path / "spec.conf").string() + " --out-dir " +
              (tmp.path / "s").string())
              .status == 0);
  const std::string cloud = (tmp.path / "s" / "scene_000.cloud").string();
  const std::string preds = (tmp.path / "s" / "scene_000.pred").string();

  const auto count_of = [](const std::string& output, const std::string& key) {
    const auto pos = output.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stoul(output.substr(pos + key.size() + 1));
  };
  const RunResult with_agg =
      run("cluster --cloud " + cloud + " --preds " + preds + " --out-dir " +
          (tmp.path / "with").string() + " --min-points 1 --mask-provider oracle");
  REQUIRE(with_agg.status == 0);
  const RunResult without_agg =
      run("cluster --cloud " + cloud + " --preds " + preds + " --out-dir " +
          (tmp.path / "without").string() +
          " --min-points 1 --mask-provider oracle --no-set-aggregation");
  REQUIRE(without_agg.status == 0);
  const auto with_count = count_of(with_agg.output, "final_instances");
  const auto without_count = count_of(without_agg.output, "final_instances");
  CHECK(without_count > with_count);
}

TEST_CASE("exports are identical across --threads and under HAIS_THREADS") {
  TempDir tmp;
  write_spec(tmp.path / "spec.conf",
             "scenes = 1\nemit_predictions = degraded\nnoise_sigma = 0.02\nnoise_seed = 5\n");
  REQUIRE(run("synth --spec " + (tmp.path / "spec.conf").string() + " --out-dir " +
              (tmp.path / "s").string())
              .status == 0);
  const std::string cloud = (tmp.path / "s" / "scene_000.cloud").string();
  const std::string preds = (tmp.path / "s" / "scene_000.pred").string();

  const auto slurp_export = [&tmp](const std::string& dir) {
    std::string all;
    std::ifstream index(tmp.path / dir / "scene_000.txt");
    std::stringstream buffer;
    buffer << index.rdbuf();
    all = buffer.str();
    for (const auto& entry :
         fs::recursive_directory_iterator(tmp.path / dir / "scene_000_masks")) {
      std::ifstream mask(entry.path());
      std::stringstream mb;
      mb << mask.rdbuf();
      all += entry.path().filename().string() + mb.str();
    }
    return all;
  };

  REQUIRE(run("cluster --cloud " + cloud + " --preds " + preds + " --out-dir " +
              (tmp.path / "t1").string() + " --min-points 20 --threads 1")
              .status == 0);
  REQUIRE(run("cluster --cloud " + cloud + " --preds " + preds + " --out-dir " +
              (tmp.path / "t8").string() + " --min-points 20 --threads 8")
              .status == 0);
  CHECK(slurp_export("t1") == slurp_export("t8"));

  // HAIS_THREADS wins over the flag but must not change the result.
  REQUIRE(run("cluster --cloud " + cloud + " --preds " + preds + " --out-dir " +
                  (tmp.path / "env").string() + " --min-points 20 --threads 1",
              "HAIS_THREADS=4")
              .status == 0);
  CHECK(slurp_export("t1") == slurp_export("env"));
}

TEST_CASE("class-radii writes a table consumable by cluster") {
  TempDir tmp;
  write_spec(tmp.path / "spec.conf", "scenes = 2\nemit_predictions = oracle\n");
  REQUIRE(run("synth --spec " + (tmp.path / "spec.conf").string() + " --out-dir " +
              (tmp.path / "s").string())
              .status == 0);
  const RunResult radii = run("class-radii " + (tmp.path / "s" / "scene_000.cloud").string() +
                              " " + (tmp.path / "s" / "scene_001.cloud").string() + " --out " +
                              (tmp.path / "radii.tsv").string());
  CHECK(radii.status == 0);
  const ClassRadii table = load_class_radii(tmp.path / "radii.tsv");
  CHECK(table.size() >= 1);

  const RunResult cluster =
      run("cluster --cloud " + (tmp.path / "s" / "scene_000.cloud").string() + " --preds " +
          (tmp.path / "s" / "scene_000.pred").string() + " --out-dir " +
          (tmp.path / "out").string() + " --class-radii " + (tmp.path / "radii.tsv").string());
  CHECK(cluster.status == 0);
}

TEST_CASE("config file values apply when flags are absent") {
  TempDir tmp;
  write_spec(tmp.path / "spec.conf", "scenes = 1\nemit_predictions = oracle\n");
  REQUIRE(run("synth --spec " + (tmp.path / "spec.conf").string() + " --out-dir " +
              (tmp.path / "s").string())
              .status == 0);
  std::ofstream config(tmp.path / "run.conf");
  config << "min_points = 1\nthreads = 2\n";
  config.close();
  const RunResult result =
      run("cluster --cloud " + (tmp.path / "s" / "scene_000.cloud").string() + " --preds " +
          (tmp.path / "s" / "scene_000.pred").string() + " --out-dir " +
          (tmp.path / "out").string() + " --config " + (tmp.path / "run.conf").string());
  CHECK(result.status == 0);
}

TEST_CASE("loss-check passes and reports per-loss lines") {
  const RunResult result = run("loss-check --trials 20 --seed 3");
  CHECK(result.status == 0);
  CHECK(result.output.find("shift_loss") != std::string::npos);
  CHECK(result.output.find("semantic_ce_loss") != std::string::npos);
  CHECK(result.output.find("all gradient checks passed") != std::string::npos);
}

TEST_CASE("bench prints per-stage timings that sum close to the total") {
  const RunResult result = run("bench --points 20000 --seed 2");
  REQUIRE(result.status == 0);
  CHECK(result.output.find("point-wise prediction") != std::string::npos);
  CHECK(result.output.find("point aggregation") != std::string::npos);
  CHECK(result.output.find("set aggregation") != std::string::npos);
  CHECK(result.output.find("intra-instance pred.") != std::string::npos);
  // "stage sum ms <x> (<p>% of total)" - the percentage must be within 5%.
  const auto pos = result.output.find("(");
  REQUIRE(pos != std::string::npos);
  const double percent = std::stod(result.output.substr(pos + 1));
  CHECK(percent >= 95.0);
  CHECK(percent <= 105.0);
}

TEST_CASE("unknown flags and bad inputs exit non-zero") {
  CHECK(run("cluster --definitely-not-a-flag").status != 0);
  CHECK(run("").status != 0);
  CHECK(run("eval --cloud /nonexistent --results /nonexistent").status != 0);
  TempDir tmp;
  std::ofstream bad(tmp.path / "bad.cloud");
  bad << "HPC v1 2 xyz\n0 0 0\n";
  bad.close();
  const RunResult result = run("cluster --cloud " + (tmp.path / "bad.cloud").string() +
                               " --preds /nonexistent --out-dir " + tmp.path.string());
  CHECK(result.status != 0);
  CHECK(result.output.find("error") != std::string::npos);
}
