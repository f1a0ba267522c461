#include "panotrack/config.hpp"

#include <charconv>
#include <functional>
#include <sstream>

#include "panotrack/error.hpp"
#include "panotrack/io.hpp"

namespace panotrack {

void PipelineConfig::validate() const {
  if (width < 16 || height < 16) throw InvalidArgument("perspective size must be at least 16x16");
  if (!(fov_deg > 0.0 && fov_deg < 179.0)) throw InvalidArgument("horizontal FOV must lie in (0, 179) degrees");
  if (frames < 2) throw InvalidArgument("frame count T must be at least 2");
  if (num_queries < 1) throw InvalidArgument("query count must be positive");
  if (threads < 0) throw InvalidArgument("thread count must be non-negative");
}

void Config::validate() const {
  pipeline.validate();
  motion.validate();
  thresholds.validate();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

struct Value {
  std::string text;
  std::string where;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(where, msg + " (got '" + text + "')"); }

  double number() const {
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end) fail("expected a number");
    return v;
  }
  int integer() const {
    long long v = 0;
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end || v < INT32_MIN || v > INT32_MAX) fail("expected an integer");
    return static_cast<int>(v);
  }
  std::uint64_t u64() const {
    std::uint64_t v = 0;
    const char* end = text.data() + text.size();
    auto [p, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || p != end) fail("expected a non-negative integer");
    return v;
  }
  bool boolean() const {
    if (text == "true") return true;
    if (text == "false") return false;
    fail("expected true or false");
  }
  std::string string() const {
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') return text.substr(1, text.size() - 2);
    return text;
  }
  std::vector<double> numbers() const {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']') fail("expected a [..] list");
    std::vector<double> out;
    std::stringstream ss(text.substr(1, text.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      out.push_back(Value{item, where}.number());
    }
    return out;
  }
};

}  // namespace

ConfigEntries parse_config_entries(const std::string& text, const std::string& where) {
  ConfigEntries entries;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string at = where + ":" + std::to_string(line_no);
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(at, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ParseError(at, "empty section name");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(at, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(at, "empty key");
    if (value.empty()) throw ParseError(at, "missing value for '" + key + "'");
    entries[section.empty() ? key : section + "." + key] = value;
  }
  return entries;
}

void apply_config(Config& c, const ConfigEntries& entries, const std::string& where) {
  using Setter = std::function<void(const Value&)>;
  auto num = [](double& dst) -> Setter { return [&dst](const Value& v) { dst = v.number(); }; };
  auto integer = [](int& dst) -> Setter { return [&dst](const Value& v) { dst = v.integer(); }; };
  auto flag = [](bool& dst) -> Setter { return [&dst](const Value& v) { dst = v.boolean(); }; };
  HumanMotionLimits& h = c.motion.human;
  PosterParams& p = c.curation.poster;
  const std::map<std::string, Setter> setters{
      {"camera.width", integer(c.pipeline.width)},
      {"camera.height", integer(c.pipeline.height)},
      {"camera.fov", num(c.pipeline.fov_deg)},
      {"pipeline.frames", integer(c.pipeline.frames)},
      {"pipeline.queries", integer(c.pipeline.num_queries)},
      {"pipeline.length_threshold", num(c.pipeline.length_threshold)},
      {"pipeline.threads", integer(c.pipeline.threads)},
      {"pipeline.seed", [&c](const Value& v) { c.seed = v.u64(); }},
      {"motion.kind",
       [&c](const Value& v) {
         try {
           const MotionSpec d = MotionSpec::defaults(parse_motion_kind(v.string()));
           c.motion.kind = d.kind;
           c.motion.theta_min = d.theta_min;
           c.motion.theta_max = d.theta_max;
         } catch (const InvalidArgument& e) {
           v.fail(e.what());
         }
       }},
      {"motion.theta_min", num(c.motion.theta_min)},
      {"motion.theta_max", num(c.motion.theta_max)},
      {"motion.spin_noise", num(c.motion.spin_noise)},
      {"motion.btf", flag(c.motion.btf)},
      {"motion.amplitude_roll", num(h.amplitude_roll)},
      {"motion.amplitude_pitch", num(h.amplitude_pitch)},
      {"motion.amplitude_yaw", num(h.amplitude_yaw)},
      {"motion.drift_pitch", num(h.drift_pitch)},
      {"motion.drift_yaw", num(h.drift_yaw)},
      {"motion.omega_min", num(h.omega_min)},
      {"motion.omega_max", num(h.omega_max)},
      {"motion.noise_roll", num(h.noise_roll)},
      {"motion.noise_pitch", num(h.noise_pitch)},
      {"motion.noise_yaw", num(h.noise_yaw)},
      {"curation.seam", flag(c.curation.check_seam)},
      {"curation.dynamics", flag(c.curation.check_dynamics)},
      {"curation.poster", flag(c.curation.check_poster)},
      {"curation.seam_strip", integer(c.curation.seam_strip)},
      {"curation.seam_min", num(c.curation.seam_min)},
      {"curation.dynamics_min", num(c.curation.dynamics_min)},
      {"curation.poster_max_fraction", num(c.curation.poster_max_fraction)},
      {"curation.poster_area_ratio", num(p.area_ratio)},
      {"curation.poster_black_level", num(p.black_level)},
      {"curation.poster_window", integer(p.window)},
      {"curation.poster_offset", num(p.offset)},
      {"curation.sample_frames", integer(c.curation.sample_frames)},
      {"eval.degrees_per_pixel", num(c.thresholds.degrees_per_pixel)},
      {"eval.multipliers", [&c](const Value& v) { c.thresholds.multipliers = v.numbers(); }},
  };
  if (auto it = entries.find("motion.kind"); it != entries.end()) {
    setters.at("motion.kind")(Value{it->second, where + ": motion.kind"});
  }
  for (const auto& [key, text] : entries) {
    if (key == "motion.kind") continue;
    auto it = setters.find(key);
    if (it == setters.end()) throw ParseError(where + ": " + key, "unknown configuration key");
    it->second(Value{text, where + ": " + key});
  }
}

Config load_config(const std::filesystem::path& path) {
  Config c;
  const std::string where = path.string();
  apply_config(c, parse_config_entries(read_text_file(path), where), where);
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(where, e.what());
  }
  return c;
}

}  // namespace panotrack
