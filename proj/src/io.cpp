#include "panotrack/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "panotrack/error.hpp"

namespace panotrack {

using nlohmann::json;
using nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

// Read-only cursor into a parsed document that knows its own location.
class Field {
public:
  Field(const json& j, const std::string& file, std::string ptr) : j_(j), file_(file), ptr_(std::move(ptr)) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(file_ + ":" + (ptr_.empty() ? "/" : ptr_), msg);
  }

  const json& raw() const { return j_; }
  bool has(const char* key) const { return j_.is_object() && j_.contains(key); }

  Field at(const char* key) const {
    if (!j_.is_object()) fail("expected an object");
    auto it = j_.find(key);
    if (it == j_.end()) Field(j_, file_, ptr_ + "/" + key).fail("missing field");
    return Field(*it, file_, ptr_ + "/" + key);
  }
  std::optional<Field> find(const char* key) const {
    if (!has(key) || j_.at(key).is_null()) return std::nullopt;
    return at(key);
  }
  Field at(std::size_t i) const { return Field(j_.at(i), file_, ptr_ + "/" + std::to_string(i)); }
  std::size_t size() const {
    if (!j_.is_array()) fail("expected an array");
    return j_.size();
  }
  double number() const {
    if (!j_.is_number()) fail("expected a number");
    return j_.get<double>();
  }
  int integer() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<int>();
  }
  std::uint64_t u64() const {
    if (j_.is_number_unsigned()) return j_.get<std::uint64_t>();
    if (j_.is_number_integer() && j_.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j_.get<std::int64_t>());
    fail("expected a non-negative integer");
  }
  bool boolean() const {
    if (j_.is_boolean()) return j_.get<bool>();
    if (j_.is_number_integer() && (j_.get<int>() == 0 || j_.get<int>() == 1)) return j_.get<int>() == 1;
    fail("expected a boolean");
  }
  std::string string() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  /// Strings as-is, integers in decimal.
  std::string id() const {
    if (j_.is_string()) return j_.get<std::string>();
    if (j_.is_number_integer()) return std::to_string(j_.get<std::int64_t>());
    fail("expected a string or integer id");
  }

private:
  const json& j_;
  const std::string& file_;
  std::string ptr_;
};

json parse_document(const std::string& text, const std::string& where) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(where + ":byte " + std::to_string(e.byte), "malformed JSON");
  }
}

template <typename Fn>
auto guarded(const std::string& where, Fn&& fn) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(where, e.what());
  } catch (const json::exception& e) {
    throw ParseError(where, e.what());
  }
}

ordered_json intrinsics_json(const Intrinsics& k) {
  return ordered_json{{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"width", k.width}, {"height", k.height}};
}

Intrinsics parse_intrinsics(const Field& f) {
  Intrinsics k{f.at("fx").number(), f.at("fy").number(), f.at("cx").number(),
               f.at("cy").number(), f.at("width").integer(), f.at("height").integer()};
  try {
    k.validate();
  } catch (const Error& e) {
    f.fail(e.what());
  }
  return k;
}

std::vector<Intrinsics> parse_intrinsics_list(const Field& f) {
  std::vector<Intrinsics> out;
  if (f.raw().is_object()) {
    out.push_back(parse_intrinsics(f));
    return out;
  }
  for (std::size_t i = 0; i < f.size(); ++i) out.push_back(parse_intrinsics(f.at(i)));
  if (out.empty()) f.fail("expected at least one intrinsics entry");
  return out;
}

ordered_json rotation_json(const Rotation& r) {
  ordered_json a = ordered_json::array();
  for (double v : r.matrix()) a.push_back(v);
  return a;
}

Rotation parse_rotation(const Field& f) {
  if (f.size() != 9) f.fail("a rotation needs 9 reals (row-major)");
  Mat3 m{};
  for (std::size_t i = 0; i < 9; ++i) m[i] = f.at(i).number();
  try {
    return Rotation::from_matrix(m);
  } catch (const Error& e) {
    f.fail(e.what());
  }
}

UnitDirection parse_direction(const Field& f) {
  if (f.size() != 3) f.fail("a direction needs 3 reals");
  const Vec3 v{f.at(std::size_t{0}).number(), f.at(1).number(), f.at(2).number()};
  if (!(std::abs(norm(v) - 1.0) <= 1e-6)) f.fail("direction is not unit-norm");
  return UnitDirection(v);
}

ordered_json direction_json(const UnitDirection& d) { return ordered_json::array({d.x(), d.y(), d.z()}); }

ordered_json motion_json(const MotionSpec& s) {
  const HumanMotionLimits& h = s.human;
  return ordered_json{{"kind", std::string(to_string(s.kind))},
                      {"theta_min", s.theta_min},
                      {"theta_max", s.theta_max},
                      {"spin_noise", s.spin_noise},
                      {"btf", s.btf},
                      {"seed", s.seed},
                      {"human",
                       ordered_json{{"amplitude_roll", h.amplitude_roll},
                                    {"amplitude_pitch", h.amplitude_pitch},
                                    {"amplitude_yaw", h.amplitude_yaw},
                                    {"drift_pitch", h.drift_pitch},
                                    {"drift_yaw", h.drift_yaw},
                                    {"omega_min", h.omega_min},
                                    {"omega_max", h.omega_max},
                                    {"noise_roll", h.noise_roll},
                                    {"noise_pitch", h.noise_pitch},
                                    {"noise_yaw", h.noise_yaw}}}};
}

MotionSpec parse_motion(const Field& f) {
  MotionSpec s;
  try {
    s = MotionSpec::defaults(parse_motion_kind(f.at("kind").string()));
  } catch (const InvalidArgument& e) {
    f.at("kind").fail(e.what());
  }
  if (auto v = f.find("theta_min")) s.theta_min = v->number();
  if (auto v = f.find("theta_max")) s.theta_max = v->number();
  if (auto v = f.find("spin_noise")) s.spin_noise = v->number();
  if (auto v = f.find("btf")) s.btf = v->boolean();
  if (auto v = f.find("seed")) s.seed = v->u64();
  if (auto h = f.find("human")) {
    HumanMotionLimits& l = s.human;
    const std::pair<const char*, double*> keys[] = {
        {"amplitude_roll", &l.amplitude_roll}, {"amplitude_pitch", &l.amplitude_pitch},
        {"amplitude_yaw", &l.amplitude_yaw},   {"drift_pitch", &l.drift_pitch},
        {"drift_yaw", &l.drift_yaw},           {"omega_min", &l.omega_min},
        {"omega_max", &l.omega_max},           {"noise_roll", &l.noise_roll},
        {"noise_pitch", &l.noise_pitch},       {"noise_yaw", &l.noise_yaw}};
    for (const auto& [key, dst] : keys) {
      if (auto v = h->find(key)) *dst = v->number();
    }
  }
  try {
    s.validate();
  } catch (const Error& e) {
    f.fail(e.what());
  }
  return s;
}

// Known keys are consumed; everything else on a track object is kept verbatim.
std::string collect_passthrough(const json& obj, std::initializer_list<const char*> known) {
  json extra = json::object();
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }) == known.end()) {
      extra[it.key()] = it.value();
    }
  }
  return extra.empty() ? std::string() : extra.dump();
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string motion_spec_to_json(const MotionSpec& spec) { return dump(motion_json(spec)); }

MotionSpec parse_motion_spec(const std::string& text, const std::string& where) {
  const json doc = parse_document(text, where);
  return guarded(where, [&] { return parse_motion(Field(doc, where, "")); });
}

std::string trajectory_to_json(const TrajectoryFile& file) {
  const Trajectory& t = file.trajectory;
  ordered_json j;
  j["frames"] = t.size();
  ordered_json rots = ordered_json::array();
  for (const auto& r : t.rotations) rots.push_back(rotation_json(r));
  j["rotations"] = std::move(rots);
  ordered_json ks = ordered_json::array();
  for (const auto& k : t.intrinsics) ks.push_back(intrinsics_json(k));
  j["intrinsics"] = std::move(ks);
  j["motion"] = file.motion ? motion_json(*file.motion) : ordered_json(nullptr);
  j["seed"] = file.seed;
  return dump(j);
}

TrajectoryFile parse_trajectory(const std::string& text, const std::string& where) {
  const json doc = parse_document(text, where);
  return guarded(where, [&] {
    const Field root(doc, where, "");
    TrajectoryFile out;
    const int frames = root.at("frames").integer();
    const Field rots = root.at("rotations");
    if (rots.size() != static_cast<std::size_t>(frames)) rots.fail("expected " + std::to_string(frames) + " rotations");
    for (std::size_t i = 0; i < rots.size(); ++i) out.trajectory.rotations.push_back(parse_rotation(rots.at(i)));
    std::vector<Intrinsics> ks = parse_intrinsics_list(root.at("intrinsics"));
    if (ks.size() == 1) ks.assign(static_cast<std::size_t>(frames), ks.front());
    if (ks.size() != static_cast<std::size_t>(frames)) root.at("intrinsics").fail("expected one entry per frame");
    out.trajectory.intrinsics = std::move(ks);
    if (auto m = root.find("motion")) out.motion = parse_motion(*m);
    if (auto s = root.find("seed")) out.seed = s->u64();
    if (frames < 1) root.at("frames").fail("must be positive");
    return out;
  });
}

TrajectoryFile read_trajectory(const std::filesystem::path& path) {
  return parse_trajectory(read_text_file(path), path.string());
}

void write_trajectory(const TrajectoryFile& file, const std::filesystem::path& path) {
  write_text_file(path, trajectory_to_json(file));
}

std::string track_set_to_json(const DirectionTrackSet& set) {
  ordered_json j;
  j["clip_id"] = set.clip_id;
  j["frames"] = set.frames;
  j["width"] = set.width;
  j["height"] = set.height;
  const bool constant_k =
      !set.intrinsics.empty() && std::all_of(set.intrinsics.begin(), set.intrinsics.end(),
                                             [&](const Intrinsics& k) { return k == set.intrinsics.front(); });
  if (constant_k) {
    j["intrinsics"] = intrinsics_json(set.intrinsics.front());
  } else {
    ordered_json ks = ordered_json::array();
    for (const auto& k : set.intrinsics) ks.push_back(intrinsics_json(k));
    j["intrinsics"] = std::move(ks);
  }
  j["trajectory_ref"] = set.trajectory_ref;
  ordered_json tracks = ordered_json::array();
  for (const auto& t : set.tracks) {
    ordered_json tj;
    tj["id"] = t.id;
    tj["query"] = ordered_json::array({t.query_u, t.query_v});
    ordered_json dirs = ordered_json::array();
    for (const auto& d : t.directions) dirs.push_back(direction_json(d));
    tj["directions"] = std::move(dirs);
    ordered_json flags = ordered_json::array();
    for (auto f : t.in_frame) flags.push_back(f != 0);
    tj["in_frame"] = std::move(flags);
    if (!t.passthrough.empty()) tj["passthrough"] = ordered_json::parse(t.passthrough);
    tracks.push_back(std::move(tj));
  }
  j["tracks"] = std::move(tracks);
  j["meta"] = ordered_json{{"motion_kind", set.motion_kind}, {"category", set.category}};
  return dump(j);
}

namespace {

DirectionTrackSet parse_track_set_field(const Field& root) {
  DirectionTrackSet s;
  s.clip_id = root.at("clip_id").id();
  s.frames = root.at("frames").integer();
  if (s.frames < 1) root.at("frames").fail("must be positive");
  if (auto w = root.find("width")) s.width = w->integer();
  if (auto h = root.find("height")) s.height = h->integer();
  if (auto k = root.find("intrinsics")) s.intrinsics = parse_intrinsics_list(*k);
  if (auto r = root.find("trajectory_ref")) s.trajectory_ref = r->string();
  if (auto meta = root.find("meta")) {
    if (auto m = meta->find("motion_kind")) s.motion_kind = m->string();
    if (auto c = meta->find("category")) s.category = c->string();
  }
  const Field tracks = root.at("tracks");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const Field tf = tracks.at(i);
    DirectionTrack t;
    t.id = tf.at("id").id();
    if (!ids.insert(t.id).second) tf.at("id").fail("duplicate track id '" + t.id + "'");
    if (auto q = tf.find("query")) {
      if (q->size() != 2) q->fail("query needs [u, v]");
      t.query_u = q->at(std::size_t{0}).number();
      t.query_v = q->at(1).number();
    }
    const Field dirs = tf.at("directions");
    if (dirs.size() != static_cast<std::size_t>(s.frames)) {
      dirs.fail("expected " + std::to_string(s.frames) + " directions, got " + std::to_string(dirs.size()));
    }
    for (std::size_t k = 0; k < dirs.size(); ++k) t.directions.push_back(parse_direction(dirs.at(k)));
    if (auto flags = tf.find("in_frame")) {
      if (flags->size() != t.directions.size()) flags->fail("in_frame length differs from directions");
      for (std::size_t k = 0; k < flags->size(); ++k) t.in_frame.push_back(flags->at(k).boolean() ? 1 : 0);
    } else {
      t.in_frame.assign(t.directions.size(), 1);
    }
    if (auto p = tf.find("passthrough")) t.passthrough = p->raw().dump();
    s.tracks.push_back(std::move(t));
  }
  return s;
}

}  // namespace

DirectionTrackSet parse_track_set(const std::string& text, const std::string& where) {
  const json doc = parse_document(text, where);
  return guarded(where, [&] { return parse_track_set_field(Field(doc, where, "")); });
}

DirectionTrackSet read_track_set(const std::filesystem::path& path) {
  return parse_track_set(read_text_file(path), path.string());
}

void write_track_set(const DirectionTrackSet& set, const std::filesystem::path& path) {
  write_text_file(path, track_set_to_json(set));
}

std::vector<DirectionTrackSet> read_track_sets(const std::filesystem::path& path) {
  std::vector<DirectionTrackSet> out;
  if (std::filesystem::is_directory(path)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::recursive_directory_iterator(path)) {
      if (e.is_regular_file() && e.path().filename() == "tracks.json") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("no tracks.json files below " + path.string());
    for (const auto& f : files) out.push_back(read_track_set(f));
    return out;
  }
  const std::string where = path.string();
  const json doc = parse_document(read_text_file(path), where);
  return guarded(where, [&] {
    const Field root(doc, where, "");
    if (doc.is_array()) {
      for (std::size_t i = 0; i < root.size(); ++i) out.push_back(parse_track_set_field(root.at(i)));
    } else if (root.has("clips")) {
      const Field clips = root.at("clips");
      for (std::size_t i = 0; i < clips.size(); ++i) out.push_back(parse_track_set_field(clips.at(i)));
    } else {
      out.push_back(parse_track_set_field(root));
    }
    return out;
  });
}

int ImportedTracks::frames() const {
  if (tracks.empty()) throw InvalidArgument("imported track file holds no tracks");
  const std::size_t n = tracks.front().points.size();
  for (const auto& t : tracks) {
    if (t.points.size() != n) throw InvalidArgument("imported tracks have different lengths");
  }
  return static_cast<int>(n);
}

std::string imported_tracks_to_json(const ImportedTracks& in) {
  ordered_json j;
  if (in.kind == GridKind::Equirect) {
    j["grid"] = ordered_json{{"kind", "equirect"}, {"width", in.equirect.width}, {"height", in.equirect.height}};
  } else {
    ordered_json g{{"kind", "perspective"}};
    if (in.intrinsics.size() == 1) {
      g["intrinsics"] = intrinsics_json(in.intrinsics.front());
    } else {
      ordered_json ks = ordered_json::array();
      for (const auto& k : in.intrinsics) ks.push_back(intrinsics_json(k));
      g["intrinsics"] = std::move(ks);
    }
    if (!in.rotations.empty()) {
      ordered_json rs = ordered_json::array();
      for (const auto& r : in.rotations) rs.push_back(rotation_json(r));
      g["rotations"] = std::move(rs);
    }
    j["grid"] = std::move(g);
  }
  ordered_json tracks = ordered_json::array();
  for (const auto& t : in.tracks) {
    ordered_json tj;
    tj["id"] = t.id;
    ordered_json pts = ordered_json::array();
    for (const auto& p : t.points) pts.push_back(ordered_json::array({p.x, p.y}));
    tj["points"] = std::move(pts);
    if (!t.passthrough.empty()) {
      const ordered_json extra = ordered_json::parse(t.passthrough);
      for (const auto& [k, v] : extra.items()) tj[k] = v;
    }
    tracks.push_back(std::move(tj));
  }
  j["tracks"] = std::move(tracks);
  return dump(j);
}

ImportedTracks parse_imported_tracks(const std::string& text, const std::string& where) {
  const json doc = parse_document(text, where);
  return guarded(where, [&] {
    const Field root(doc, where, "");
    ImportedTracks out;
    const Field grid = root.at("grid");
    const std::string kind = grid.at("kind").string();
    if (kind == "equirect") {
      out.kind = GridKind::Equirect;
      out.equirect = {grid.at("width").integer(), grid.at("height").integer()};
      try {
        out.equirect.validate();
      } catch (const Error& e) {
        grid.fail(e.what());
      }
    } else if (kind == "perspective") {
      out.kind = GridKind::Perspective;
      out.intrinsics = parse_intrinsics_list(grid.at("intrinsics"));
      if (auto rs = grid.find("rotations")) {
        for (std::size_t i = 0; i < rs->size(); ++i) out.rotations.push_back(parse_rotation(rs->at(i)));
      }
    } else {
      grid.at("kind").fail("expected \"equirect\" or \"perspective\"");
    }
    const Field tracks = root.at("tracks");
    std::set<std::string> ids;
    std::size_t length = 0;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      const Field tf = tracks.at(i);
      PointTrack2D t;
      t.id = tf.at("id").id();
      if (!ids.insert(t.id).second) tf.at("id").fail("duplicate track id '" + t.id + "'");
      const Field pts = tf.at("points");
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const Field p = pts.at(k);
        if (p.size() != 2) p.fail("a point needs [i, j]");
        const double x = p.at(std::size_t{0}).number();
        const double y = p.at(1).number();
        if (!std::isfinite(x) || !std::isfinite(y)) p.fail("non-finite coordinate");
        t.points.push_back({x, y});
      }
      if (i == 0) length = t.points.size();
      if (t.points.size() != length) pts.fail("track length differs from the first track");
      if (length < 2) pts.fail("a track needs at least two points");
      t.passthrough = collect_passthrough(tf.raw(), {"id", "points"});
      out.tracks.push_back(std::move(t));
    }
    if (out.tracks.empty()) tracks.fail("no tracks");
    if (out.kind == GridKind::Perspective) {
      if (out.intrinsics.size() != 1 && out.intrinsics.size() != length) {
        grid.at("intrinsics").fail("expected one entry or one per frame");
      }
      if (!out.rotations.empty() && out.rotations.size() != length) {
        grid.at("rotations").fail("expected one rotation per frame");
      }
    }
    return out;
  });
}

ImportedTracks read_imported_tracks(const std::filesystem::path& path) {
  return parse_imported_tracks(read_text_file(path), path.string());
}

namespace {

ordered_json optional_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json aggregate_json(const Aggregate& a) {
  return ordered_json{{"clips", a.clips}, {"mean", optional_json(a.mean)}, {"std", optional_json(a.std)}};
}

ordered_json split_metrics_json(const SplitMetrics& m) {
  return ordered_json{{"count", m.count},
                      {"fractions", m.fractions},
                      {"delta_avg", optional_json(m.delta_avg)},
                      {"mean_angular", optional_json(m.mean_angular)}};
}

ordered_json summary_json(const Summary& s) {
  ordered_json j;
  j["clips"] = s.clips;
  for (Split sp : kSplits) {
    const SplitSummary& ss = s.splits[static_cast<std::size_t>(sp)];
    ordered_json fr = ordered_json::array();
    for (const auto& a : ss.fractions) fr.push_back(aggregate_json(a));
    j[std::string(to_string(sp))] = ordered_json{{"delta_avg", aggregate_json(ss.delta_avg)},
                                                 {"mean_angular", aggregate_json(ss.mean_angular)},
                                                 {"fractions", std::move(fr)},
                                                 {"pooled", split_metrics_json(ss.pooled)}};
  }
  return j;
}

}  // namespace

std::string eval_report_to_json(const EvalReport& report) {
  ordered_json j;
  j["config"] = ordered_json{{"degrees_per_pixel", report.config.degrees_per_pixel},
                             {"multipliers", report.config.multipliers},
                             {"thresholds_deg", report.config.thresholds()}};
  j["overall"] = summary_json(report.overall);
  ordered_json by_motion = ordered_json::object();
  for (const auto& [k, s] : report.by_motion) by_motion[k] = summary_json(s);
  j["by_motion"] = std::move(by_motion);
  ordered_json by_category = ordered_json::object();
  for (const auto& [k, s] : report.by_category) by_category[k] = summary_json(s);
  j["by_category"] = std::move(by_category);
  ordered_json clips = ordered_json::array();
  for (const auto& c : report.clips) {
    ordered_json cj{{"clip_id", c.clip_id}, {"motion_kind", c.motion_kind}, {"category", c.category}};
    for (Split sp : kSplits) cj[std::string(to_string(sp))] = split_metrics_json(c.splits[static_cast<std::size_t>(sp)]);
    clips.push_back(std::move(cj));
  }
  j["clips"] = std::move(clips);
  return dump(j);
}

std::string curation_report_to_json(const CurationReport& report, const std::string& clip) {
  ordered_json j;
  j["clip"] = clip;
  j["frame_indices"] = report.frame_indices;
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks) {
    checks.push_back(ordered_json{{"name", c.name}, {"score", c.score}, {"pass", c.pass}, {"per_frame", c.per_frame}});
  }
  j["checks"] = std::move(checks);
  std::vector<std::string> failed;
  for (const auto& c : report.checks) {
    if (!c.pass) failed.push_back(c.name);
  }
  j["failed"] = failed;
  j["pass"] = report.pass;
  return dump(j);
}

}  // namespace panotrack
