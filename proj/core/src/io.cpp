#include "hais/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "hais/errors.hpp"

namespace hais {

namespace {

namespace fs = std::filesystem;

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

/// Line reader that skips comments/blank lines and tracks 1-based numbers.
class LineReader {
 public:
  explicit LineReader(const fs::path& path) : path_(path.string()), in_(path) {
    if (!in_) {
      throw IoError("cannot open " + path_);
    }
  }

  /// Next content line, with leading/trailing whitespace kept as-is.
  /// Returns false at EOF. line() reports the number of the returned line.
  bool next(std::string& out) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++line_;
      const std::size_t first = raw.find_first_not_of(" \t\r");
      if (first == std::string::npos || raw[first] == '#') {
        continue;
      }
      out = raw;
      return true;
    }
    ++line_;  // position past EOF, used for "expected more lines" messages
    return false;
  }

  long line() const { return line_; }
  const std::string& path() const { return path_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(path_, line_, what); }

 private:
  std::string path_;
  std::ifstream in_;
  long line_ = 0;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    tokens.push_back(tok);
  }
  return tokens;
}

double parse_double(const LineReader& reader, const std::string& token) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    reader.fail("invalid number '" + token + "'");
  }
  if (!std::isfinite(v)) {
    reader.fail("non-finite value '" + token + "'");
  }
  return v;
}

long long parse_int(const LineReader& reader, const std::string& token) {
  long long v = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) {
    reader.fail("invalid integer '" + token + "'");
  }
  return v;
}

}  // namespace

std::string format_value(double v) { return fmt9(v); }

PointCloud load_cloud(const fs::path& path) {
  LineReader reader(path);
  std::string line;
  if (!reader.next(line)) {
    reader.fail("missing header");
  }
  const auto header = tokenize(line);
  if (header.size() != 4 || header[0] != "HPC" || header[1] != "v1") {
    reader.fail("expected header 'HPC v1 <n_points> <fields>'");
  }
  const long long declared = parse_int(reader, header[2]);
  if (declared < 0) {
    reader.fail("negative point count");
  }
  const std::string& fields = header[3];
  std::size_t expected_tokens = 0;
  bool with_colors = false;
  bool with_gt = false;
  if (fields == "xyz") {
    expected_tokens = 3;
  } else if (fields == "xyzrgb") {
    expected_tokens = 6;
    with_colors = true;
  } else if (fields == "xyzrgb+gt") {
    expected_tokens = 8;
    with_colors = true;
    with_gt = true;
  } else {
    reader.fail("unknown fields descriptor '" + fields + "'");
  }

  PointCloud cloud;
  const std::size_t n = static_cast<std::size_t>(declared);
  cloud.positions.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!reader.next(line)) {
      reader.fail("expected " + std::to_string(n) + " point lines, found " + std::to_string(i));
    }
    const auto tokens = tokenize(line);
    if (tokens.size() != expected_tokens) {
      reader.fail("expected " + std::to_string(expected_tokens) + " fields, found " +
                  std::to_string(tokens.size()));
    }
    cloud.positions.push_back(
        {parse_double(reader, tokens[0]), parse_double(reader, tokens[1]),
         parse_double(reader, tokens[2])});
    if (with_colors) {
      const Color c{parse_double(reader, tokens[3]), parse_double(reader, tokens[4]),
                    parse_double(reader, tokens[5])};
      if (c.r < 0.0 || c.r > 1.0 || c.g < 0.0 || c.g > 1.0 || c.b < 0.0 || c.b > 1.0) {
        reader.fail("color component outside [0,1]");
      }
      cloud.colors.push_back(c);
    }
    if (with_gt) {
      const long long sem = parse_int(reader, tokens[6]);
      const long long inst = parse_int(reader, tokens[7]);
      if (sem < -1 || inst < -1) {
        reader.fail("label ids must be >= -1");
      }
      cloud.gt_semantic.push_back(static_cast<ClassId>(sem));
      cloud.gt_instance.push_back(static_cast<std::int32_t>(inst));
    }
  }
  if (reader.next(line)) {
    reader.fail("trailing content after " + std::to_string(n) + " declared points");
  }
  cloud.validate();
  return cloud;
}

void write_cloud(const PointCloud& cloud, const fs::path& path) {
  cloud.validate();
  const bool with_gt = cloud.has_gt();
  if (with_gt && !cloud.has_colors()) {
    throw InputError("write_cloud: the xyzrgb+gt format requires colors");
  }
  const std::string fields = with_gt ? "xyzrgb+gt" : (cloud.has_colors() ? "xyzrgb" : "xyz");
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << "HPC v1 " << cloud.size() << " " << fields << "\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud.positions[i];
    out << fmt9(p.x) << " " << fmt9(p.y) << " " << fmt9(p.z);
    if (cloud.has_colors()) {
      const Color& c = cloud.colors[i];
      out << " " << fmt9(c.r) << " " << fmt9(c.g) << " " << fmt9(c.b);
    }
    if (with_gt) {
      out << " " << cloud.gt_semantic[i] << " " << cloud.gt_instance[i];
    }
    out << "\n";
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

PredictionFile load_predictions(const fs::path& path, const PointCloud& cloud) {
  LineReader reader(path);
  PredictionFile file;
  file.prediction.semantic.reserve(cloud.size());
  file.prediction.shift.reserve(cloud.size());
  std::string line;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!reader.next(line)) {
      reader.fail("expected " + std::to_string(cloud.size()) + " prediction lines, found " +
                  std::to_string(i));
    }
    const auto tokens = tokenize(line);
    if (tokens.size() != 4) {
      reader.fail("expected 'sem_id dx dy dz'");
    }
    const long long sem = parse_int(reader, tokens[0]);
    if (sem < -1) {
      reader.fail("semantic id must be >= -1");
    }
    file.prediction.semantic.push_back(static_cast<ClassId>(sem));
    file.prediction.shift.push_back({parse_double(reader, tokens[1]),
                                     parse_double(reader, tokens[2]),
                                     parse_double(reader, tokens[3])});
  }
  // Optional replay sections: an INSTANCE header opens an entry, every
  // following line is a member of that entry until the next header.
  while (reader.next(line)) {
    const auto tokens = tokenize(line);
    if (tokens[0] == "INSTANCE") {
      if (tokens.size() != 3) {
        reader.fail("expected 'INSTANCE <k> <score>'");
      }
      const long long k = parse_int(reader, tokens[1]);
      if (k != static_cast<long long>(file.replay.size())) {
        reader.fail("instance sections must be consecutive starting at 0");
      }
      ReplayMaskProvider::Entry entry;
      entry.score = parse_double(reader, tokens[2]);
      if (entry.score < 0.0 || entry.score > 1.0) {
        reader.fail("instance score outside [0,1]");
      }
      file.replay.push_back(std::move(entry));
      continue;
    }
    if (file.replay.empty()) {
      reader.fail("member line before any INSTANCE header");
    }
    if (tokens.size() != 2) {
      reader.fail("expected '<point_index> <mask_prob>'");
    }
    const long long idx = parse_int(reader, tokens[0]);
    if (idx < 0 || static_cast<std::size_t>(idx) >= cloud.size()) {
      reader.fail("point index " + tokens[0] + " outside cloud of " +
                  std::to_string(cloud.size()) + " points");
    }
    const double prob = parse_double(reader, tokens[1]);
    if (prob < 0.0 || prob > 1.0) {
      reader.fail("mask probability outside [0,1]");
    }
    file.replay.back().member_probs.emplace_back(static_cast<PointIndex>(idx), prob);
  }
  file.prediction.validate();
  return file;
}

void write_predictions(const PerPointPrediction& pred, const fs::path& path,
                       std::span<const ReplayMaskProvider::Entry> replay) {
  pred.validate();
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const Vec3& s = pred.shift[i];
    out << pred.semantic[i] << " " << fmt9(s.x) << " " << fmt9(s.y) << " " << fmt9(s.z) << "\n";
  }
  for (std::size_t k = 0; k < replay.size(); ++k) {
    out << "INSTANCE " << k << " " << fmt9(replay[k].score) << "\n";
    for (const auto& [idx, prob] : replay[k].member_probs) {
      out << idx << " " << fmt9(prob) << "\n";
    }
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

void export_results(std::span<const ScoredInstance> preds, std::size_t n_points,
                    const fs::path& out_dir, const std::string& name) {
  std::error_code ec;
  fs::create_directories(out_dir / (name + "_masks"), ec);
  if (ec) {
    throw IoError("cannot create output directory " + (out_dir / (name + "_masks")).string());
  }
  std::ofstream index(out_dir / (name + ".txt"));
  if (!index) {
    throw IoError("cannot write index file in " + out_dir.string());
  }
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const ScoredInstance& inst = preds[k];
    for (PointIndex i : inst.cluster.point_indices) {
      if (i < 0 || static_cast<std::size_t>(i) >= n_points) {
        throw InputError("export_results: point index " + std::to_string(i) +
                         " outside cloud of " + std::to_string(n_points) + " points");
      }
    }
    char mask_name[64];
    std::snprintf(mask_name, sizeof(mask_name), "%03zu.txt", k);
    const std::string rel = name + "_masks/" + mask_name;
    index << rel << " " << inst.cluster.semantic << " " << fmt9(inst.score) << "\n";
    std::ofstream mask(out_dir / rel);
    if (!mask) {
      throw IoError("cannot write mask file " + rel);
    }
    std::vector<char> bits(n_points, '0');
    for (PointIndex i : inst.cluster.point_indices) {
      bits[static_cast<std::size_t>(i)] = '1';
    }
    for (char b : bits) {
      mask << b << "\n";
    }
    if (!mask) {
      throw IoError("write failed for mask file " + rel);
    }
  }
  if (!index) {
    throw IoError("write failed for index file");
  }
}

std::vector<ExportedInstance> parse_results(const fs::path& index_path, std::size_t n_points) {
  LineReader reader(index_path);
  std::vector<ExportedInstance> out;
  std::string line;
  while (reader.next(line)) {
    const auto tokens = tokenize(line);
    if (tokens.size() != 3) {
      reader.fail("expected '<mask_path> <class_id> <confidence>'");
    }
    ExportedInstance inst;
    inst.class_id = static_cast<ClassId>(parse_int(reader, tokens[1]));
    inst.confidence = parse_double(reader, tokens[2]);
    const fs::path mask_path = index_path.parent_path() / tokens[0];
    LineReader mask(mask_path);
    std::string bit;
    for (std::size_t i = 0; i < n_points; ++i) {
      if (!mask.next(bit)) {
        mask.fail("expected " + std::to_string(n_points) + " mask lines");
      }
      const auto bits = tokenize(bit);
      if (bits.size() != 1 || (bits[0] != "0" && bits[0] != "1")) {
        mask.fail("mask lines must be 0 or 1");
      }
      if (bits[0] == "1") {
        inst.points.push_back(static_cast<PointIndex>(i));
      }
    }
    if (mask.next(bit)) {
      mask.fail("trailing content in mask file");
    }
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<ScoredInstance> exported_as_scored(std::span<const ExportedInstance> exported,
                                               std::span<const Vec3> positions) {
  std::vector<ScoredInstance> out;
  out.reserve(exported.size());
  for (const ExportedInstance& e : exported) {
    ScoredInstance s;
    s.cluster.point_indices = e.points;
    s.cluster.semantic = e.class_id;
    if (!e.points.empty()) {
      s.cluster.center = centroid(positions, s.cluster.point_indices);
    }
    s.score = e.confidence;
    out.push_back(std::move(s));
  }
  return out;
}

ClassRadii load_class_radii(const fs::path& path) {
  LineReader reader(path);
  ClassRadii radii;
  std::string line;
  while (reader.next(line)) {
    const auto tokens = tokenize(line);
    if (tokens.size() != 2) {
      reader.fail("expected '<class_id>\t<radius>'");
    }
    const long long cls = parse_int(reader, tokens[0]);
    const double r = parse_double(reader, tokens[1]);
    if (r < 0.0) {
      reader.fail("radius must be >= 0");
    }
    radii.set(static_cast<ClassId>(cls), r);
  }
  return radii;
}

void write_class_radii(const ClassRadii& radii, const fs::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  for (const auto& [cls, r] : radii.entries()) {
    out << cls << "\t" << fmt9(r) << "\n";
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

std::map<std::string, std::string> load_config_file(const fs::path& path) {
  LineReader reader(path);
  std::map<std::string, std::string> config;
  std::string line;
  while (reader.next(line)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      reader.fail("expected 'key = value'");
    }
    auto trim = [](std::string s) {
      const std::size_t first = s.find_first_not_of(" \t\r");
      const std::size_t last = s.find_last_not_of(" \t\r");
      return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      reader.fail("empty key");
    }
    config[key] = value;
  }
  return config;
}

namespace {

double config_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size() || !std::isfinite(v)) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for '" + key + "': " + value);
  }
}

long long config_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for '" + key + "': " + value);
  }
}

}  // namespace

SceneSpec scene_spec_from_config(const std::map<std::string, std::string>& config) {
  SceneSpec spec;
  spec.class_sizes.clear();
  static const std::set<std::string> known = {
      "instances_min",  "instances_max", "class_sizes",        "shapes",
      "extent",         "scale_min",     "scale_max",          "min_separation",
      "background_fraction", "background_class", "seed",
      // consumed by callers, accepted here so one file can configure a run
      "scenes", "emit_predictions", "noise_sigma", "noise_dropout",
      "noise_semantic_error", "noise_seed"};
  for (const auto& [key, value] : config) {
    if (!known.contains(key)) {
      throw ConfigError("unknown scene spec key '" + key + "'");
    }
  }
  const auto lookup = [&config](const char* key) -> const std::string* {
    auto it = config.find(key);
    return it == config.end() ? nullptr : &it->second;
  };
  if (const auto* v = lookup("instances_min")) {
    spec.min_instances = static_cast<std::size_t>(config_int("instances_min", *v));
  }
  if (const auto* v = lookup("instances_max")) {
    spec.max_instances = static_cast<std::size_t>(config_int("instances_max", *v));
  }
  if (const auto* v = lookup("class_sizes")) {
    std::istringstream is(*v);
    std::string item;
    while (is >> item) {
      const std::size_t c1 = item.find(':');
      const std::size_t c2 = item.find(':', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) {
        throw ConfigError("class_sizes entries must look like '<class>:<min>:<max>', got '" +
                          item + "'");
      }
      const ClassId cls =
          static_cast<ClassId>(config_int("class_sizes", item.substr(0, c1)));
      SizeRange range;
      range.min_points =
          static_cast<std::size_t>(config_int("class_sizes", item.substr(c1 + 1, c2 - c1 - 1)));
      range.max_points = static_cast<std::size_t>(config_int("class_sizes", item.substr(c2 + 1)));
      spec.class_sizes[cls] = range;
    }
  }
  if (const auto* v = lookup("shapes")) {
    spec.shapes.clear();
    std::istringstream is(*v);
    std::string shape;
    while (is >> shape) {
      if (shape == "box") {
        spec.shapes.push_back(ShapeKind::kBox);
      } else if (shape == "sphere") {
        spec.shapes.push_back(ShapeKind::kSphere);
      } else if (shape == "plane") {
        spec.shapes.push_back(ShapeKind::kPlanePatch);
      } else {
        throw ConfigError("unknown shape '" + shape + "'");
      }
    }
  }
  if (const auto* v = lookup("extent")) {
    spec.extent = config_double("extent", *v);
  }
  if (const auto* v = lookup("scale_min")) {
    spec.instance_scale_min = config_double("scale_min", *v);
  }
  if (const auto* v = lookup("scale_max")) {
    spec.instance_scale_max = config_double("scale_max", *v);
  }
  if (const auto* v = lookup("min_separation")) {
    spec.min_separation = config_double("min_separation", *v);
  }
  if (const auto* v = lookup("background_fraction")) {
    spec.background_fraction = config_double("background_fraction", *v);
  }
  if (const auto* v = lookup("background_class")) {
    spec.background_class = static_cast<ClassId>(config_int("background_class", *v));
  }
  if (const auto* v = lookup("seed")) {
    spec.seed = static_cast<std::uint64_t>(config_int("seed", *v));
  }
  if (spec.class_sizes.empty()) {
    throw ConfigError("scene spec requires a class_sizes entry");
  }
  spec.validate();
  return spec;
}

NoiseSpec noise_spec_from_config(const std::map<std::string, std::string>& config) {
  NoiseSpec noise;
  const auto lookup = [&config](const char* key) -> const std::string* {
    auto it = config.find(key);
    return it == config.end() ? nullptr : &it->second;
  };
  if (const auto* v = lookup("noise_sigma")) {
    noise.shift_noise_sigma = config_double("noise_sigma", *v);
  }
  if (const auto* v = lookup("noise_dropout")) {
    noise.shift_dropout_fraction = config_double("noise_dropout", *v);
  }
  if (const auto* v = lookup("noise_semantic_error")) {
    noise.semantic_error_rate = config_double("noise_semantic_error", *v);
  }
  if (const auto* v = lookup("noise_seed")) {
    noise.seed = static_cast<std::uint64_t>(config_int("noise_seed", *v));
  }
  noise.validate();
  return noise;
}

}  // namespace hais
