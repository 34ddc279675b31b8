#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "hais/errors.hpp"
#include "hais/io.hpp"
#include "hais/synth.hpp"
#include "testing/oracles.hpp"

using namespace hais;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("hais_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

/// Round a value through the 9-significant-digit text representation.
double through_text(double v) { return std::stod(format_value(v)); }

PointCloud quantized_random_cloud(std::mt19937& rng, std::size_t n, bool with_gt) {
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> channel(0.0, 1.0);
  std::uniform_int_distribution<ClassId> cls(1, 4);
  PointCloud cloud;
  for (std::size_t i = 0; i < n; ++i) {
    cloud.positions.push_back(
        {through_text(coord(rng)), through_text(coord(rng)), through_text(coord(rng))});
    cloud.colors.push_back(
        {through_text(channel(rng)), through_text(channel(rng)), through_text(channel(rng))});
    if (with_gt) {
      const ClassId c = cls(rng);
      cloud.gt_semantic.push_back(c);
      cloud.gt_instance.push_back(c % 2 == 0 ? static_cast<std::int32_t>(i % 3) : -1);
    }
  }
  if (with_gt) {
    // keep the one-class-per-instance invariant: reassign semantics by instance
    for (std::size_t i = 0; i < n; ++i) {
      if (cloud.gt_instance[i] >= 0) {
        cloud.gt_semantic[i] = 2 + cloud.gt_instance[i];
      }
    }
  }
  return cloud;
}

}  // namespace

TEST_CASE("cloud write/read round-trips bitwise") {
  TempDir tmp;
  std::mt19937 rng(71);
  for (bool with_gt : {false, true}) {
    const PointCloud original = quantized_random_cloud(rng, 200, with_gt);
    const fs::path file = tmp.path / (with_gt ? "gt.cloud" : "plain.cloud");
    write_cloud(original, file);
    const PointCloud loaded = load_cloud(file);
    CHECK(loaded.positions == original.positions);
    CHECK(loaded.colors == original.colors);
    CHECK(loaded.gt_semantic == original.gt_semantic);
    CHECK(loaded.gt_instance == original.gt_instance);
  }
}

TEST_CASE("synth scene survives a write/read cycle") {
  TempDir tmp;
  SceneSpec spec;
  spec.class_sizes = {{1, {150, 300}}, {2, {150, 300}}};
  spec.seed = 11;
  const PointCloud scene = generate_scene(spec);
  write_cloud(scene, tmp.path / "scene.cloud");
  const PointCloud loaded = load_cloud(tmp.path / "scene.cloud");
  REQUIRE(loaded.size() == scene.size());
  CHECK(loaded.gt_semantic == scene.gt_semantic);
  CHECK(loaded.gt_instance == scene.gt_instance);
  for (std::size_t i = 0; i < scene.size(); ++i) {
    CHECK(distance(loaded.positions[i], scene.positions[i]) < 1e-7);
  }
}

TEST_CASE("cloud parser reports the offending line") {
  TempDir tmp;
  SUBCASE("missing points") {
    const fs::path file = tmp.path / "short.cloud";
    std::ofstream out(file);
    out << "HPC v1 10 xyz\n";
    for (int i = 0; i < 9; ++i) {
      out << "0 0 " << i << "\n";
    }
    out.close();
    try {
      load_cloud(file);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 11);
    }
  }
  SUBCASE("trailing content") {
    const fs::path file = tmp.path / "long.cloud";
    std::ofstream out(file);
    out << "HPC v1 1 xyz\n0 0 0\n0 0 1\n";
    out.close();
    CHECK_THROWS_AS(load_cloud(file), ParseError);
  }
  SUBCASE("bad header") {
    const fs::path file = tmp.path / "header.cloud";
    std::ofstream out(file);
    out << "HPC v2 1 xyz\n0 0 0\n";
    out.close();
    CHECK_THROWS_AS(load_cloud(file), ParseError);
  }
  SUBCASE("non-finite coordinate") {
    const fs::path file = tmp.path / "nan.cloud";
    std::ofstream out(file);
    out << "HPC v1 1 xyz\nnan 0 0\n";
    out.close();
    CHECK_THROWS_AS(load_cloud(file), ParseError);
  }
  SUBCASE("unknown descriptor") {
    const fs::path file = tmp.path / "desc.cloud";
    std::ofstream out(file);
    out << "HPC v1 1 xyzn\n0 0 0\n";
    out.close();
    CHECK_THROWS_AS(load_cloud(file), ParseError);
  }
}

TEST_CASE("comments and blank lines are ignored") {
  TempDir tmp;
  const fs::path file = tmp.path / "comments.cloud";
  std::ofstream out(file);
  out << "# a comment\n\nHPC v1 2 xyz\n# interleaved\n1 2 3\n\n4 5 6\n# trailing\n";
  out.close();
  const PointCloud cloud = load_cloud(file);
  REQUIRE(cloud.size() == 2);
  CHECK(cloud.positions[0] == Vec3{1, 2, 3});
  CHECK(cloud.positions[1] == Vec3{4, 5, 6});
}

TEST_CASE("prediction file round-trip with replay sections") {
  TempDir tmp;
  std::mt19937 rng(73);
  const PointCloud cloud = quantized_random_cloud(rng, 50, false);
  PerPointPrediction pred;
  std::uniform_real_distribution<double> shift(-0.5, 0.5);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    pred.semantic.push_back(static_cast<ClassId>(i % 3));
    pred.shift.push_back(
        {through_text(shift(rng)), through_text(shift(rng)), through_text(shift(rng))});
  }
  std::vector<ReplayMaskProvider::Entry> replay(2);
  replay[0].score = 0.75;
  replay[0].member_probs = {{0, 1.0}, {3, 0.25}};
  replay[1].score = 0.5;
  replay[1].member_probs = {{10, 0.125}};

  const fs::path file = tmp.path / "preds.txt";
  write_predictions(pred, file, replay);
  const PredictionFile loaded = load_predictions(file, cloud);
  CHECK(loaded.prediction.semantic == pred.semantic);
  CHECK(loaded.prediction.shift == pred.shift);
  REQUIRE(loaded.replay.size() == 2);
  CHECK(loaded.replay[0].score == 0.75);
  CHECK(loaded.replay[0].member_probs == replay[0].member_probs);
  CHECK(loaded.replay[1].member_probs == replay[1].member_probs);
}

TEST_CASE("prediction parser validates counts and values") {
  TempDir tmp;
  PointCloud cloud;
  cloud.positions = {{0, 0, 0}, {1, 1, 1}};
  SUBCASE("short file") {
    const fs::path file = tmp.path / "short.pred";
    std::ofstream out(file);
    out << "1 0 0 0\n";
    out.close();
    CHECK_THROWS_AS(load_predictions(file, cloud), ParseError);
  }
  SUBCASE("member line before header") {
    const fs::path file = tmp.path / "member.pred";
    std::ofstream out(file);
    out << "1 0 0 0\n1 0 0 0\n3 0.5\n";
    out.close();
    CHECK_THROWS_AS(load_predictions(file, cloud), ParseError);
  }
  SUBCASE("replay index out of range") {
    const fs::path file = tmp.path / "range.pred";
    std::ofstream out(file);
    out << "1 0 0 0\n1 0 0 0\nINSTANCE 0 0.5\n7 0.5\n";
    out.close();
    CHECK_THROWS_AS(load_predictions(file, cloud), ParseError);
  }
}

TEST_CASE("export then reparse preserves instances") {
  TempDir tmp;
  std::vector<ScoredInstance> preds;
  {
    ScoredInstance a;
    a.cluster.point_indices = {0, 2};
    a.cluster.semantic = 3;
    a.score = 0.875;
    preds.push_back(a);
    ScoredInstance b;
    b.cluster.point_indices = {1};
    b.cluster.semantic = 1;
    b.score = 0.5;
    preds.push_back(b);
  }
  export_results(preds, 4, tmp.path, "scene0");

  // Spot-check the mask layout: 1 0 1 0 for instance a.
  std::ifstream mask(tmp.path / "scene0_masks" / "000.txt");
  std::string bits, line;
  while (std::getline(mask, line)) {
    bits += line;
  }
  CHECK(bits == "1010");

  const auto parsed = parse_results(tmp.path / "scene0.txt", 4);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[0].points == std::vector<PointIndex>{0, 2});
  CHECK(parsed[0].class_id == 3);
  CHECK(parsed[0].confidence == 0.875);
  CHECK(parsed[1].points == std::vector<PointIndex>{1});

  // Round-trip again: exporting the parsed result reproduces the files.
  const auto scored = exported_as_scored(parsed, std::vector<Vec3>(4));
  export_results(scored, 4, tmp.path, "scene1");
  const auto reparsed = parse_results(tmp.path / "scene1.txt", 4);
  REQUIRE(reparsed.size() == parsed.size());
  for (std::size_t k = 0; k < parsed.size(); ++k) {
    CHECK(reparsed[k].points == parsed[k].points);
    CHECK(reparsed[k].class_id == parsed[k].class_id);
    CHECK(reparsed[k].confidence == parsed[k].confidence);
  }
}

TEST_CASE("empty prediction list exports an empty index") {
  TempDir tmp;
  export_results({}, 10, tmp.path, "empty");
  CHECK(parse_results(tmp.path / "empty.txt", 10).empty());
}

TEST_CASE("export rejects out-of-range indices") {
  TempDir tmp;
  ScoredInstance bad;
  bad.cluster.point_indices = {5};
  bad.cluster.semantic = 1;
  CHECK_THROWS_AS(export_results(std::vector<ScoredInstance>{bad}, 3, tmp.path, "bad"),
                  InputError);
}

TEST_CASE("class radii table round-trip") {
  TempDir tmp;
  ClassRadii radii;
  radii.set(1, 0.25);
  radii.set(7, 1.5);
  const fs::path file = tmp.path / "radii.tsv";
  write_class_radii(radii, file);
  const ClassRadii loaded = load_class_radii(file);
  CHECK(loaded.entries() == radii.entries());

  // Tab-separated rows, exactly one per class.
  std::ifstream in(file);
  std::string line;
  std::getline(in, line);
  CHECK(line == "1\t0.25");
}

TEST_CASE("config files parse key = value lines") {
  TempDir tmp;
  const fs::path file = tmp.path / "run.conf";
  std::ofstream out(file);
  out << "# comment\nr_point = 0.05\nname = trial 7\n";
  out.close();
  const auto config = load_config_file(file);
  CHECK(config.at("r_point") == "0.05");
  CHECK(config.at("name") == "trial 7");

  const fs::path bad = tmp.path / "bad.conf";
  std::ofstream bout(bad);
  bout << "no equals sign\n";
  bout.close();
  CHECK_THROWS_AS(load_config_file(bad), ParseError);
}

TEST_CASE("scene spec from config") {
  std::map<std::string, std::string> config = {
      {"instances_min", "2"},          {"instances_max", "4"},
      {"class_sizes", "1:100:200 2:300:400"}, {"shapes", "sphere box"},
      {"extent", "8"},                 {"seed", "42"},
      {"background_fraction", "0.1"},
  };
  const SceneSpec spec = scene_spec_from_config(config);
  CHECK(spec.min_instances == 2);
  CHECK(spec.max_instances == 4);
  CHECK(spec.class_sizes.at(1).min_points == 100);
  CHECK(spec.class_sizes.at(2).max_points == 400);
  CHECK(spec.shapes.size() == 2);
  CHECK(spec.extent == 8.0);
  CHECK(spec.seed == 42);

  config["bogus"] = "1";
  CHECK_THROWS_AS(scene_spec_from_config(config), ConfigError);
  config.erase("bogus");
  config.erase("class_sizes");
  CHECK_THROWS_AS(scene_spec_from_config(config), ConfigError);
}

TEST_CASE("noise spec from config") {
  const std::map<std::string, std::string> config = {{"noise_sigma", "0.04"},
                                                     {"noise_dropout", "0.5"},
                                                     {"noise_semantic_error", "0.02"},
                                                     {"noise_seed", "7"}};
  const NoiseSpec noise = noise_spec_from_config(config);
  CHECK(noise.shift_noise_sigma == 0.04);
  CHECK(noise.shift_dropout_fraction == 0.5);
  CHECK(noise.semantic_error_rate == 0.02);
  CHECK(noise.seed == 7);
}

TEST_CASE("missing files raise IO errors") {
  CHECK_THROWS_AS(load_cloud("/nonexistent/path.cloud"), IoError);
  CHECK_THROWS_AS(load_class_radii("/nonexistent/radii.tsv"), IoError);
}
