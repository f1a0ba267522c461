#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "panotrack/config.hpp"
#include "panotrack/curation.hpp"
#include "panotrack/error.hpp"
#include "panotrack/io.hpp"
#include "panotrack/metrics.hpp"
#include "panotrack/parallel.hpp"
#include "panotrack/pipeline.hpp"
#include "panotrack/random.hpp"
#include "panotrack/resample.hpp"
#include "panotrack/synth.hpp"

namespace panotrack::cli {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kStreamSampleSeed = 200;
constexpr std::uint64_t kStreamSampleMotion = 201;
constexpr std::uint64_t kStreamMotionSeed = 202;

Config base_config(const std::string& path) { return path.empty() ? Config{} : load_config(path); }

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

MotionSpec motion_for(const Config& cfg, MotionKind kind) {
  MotionSpec s = cfg.motion;
  if (kind != s.kind) {
    const MotionSpec d = MotionSpec::defaults(kind);
    s.kind = kind;
    s.theta_min = d.theta_min;
    s.theta_max = d.theta_max;
  }
  return s;
}

// Options shared by every subcommand.
struct Common {
  std::string config;
  int threads = 0;
  CLI::Option* threads_opt = nullptr;

  void add(CLI::App* app) {
    app->add_option("--config", config, "TOML-style configuration file")->check(CLI::ExistingFile);
    threads_opt = app->add_option("--threads", threads, "Worker threads (default: PANO_TRACK_THREADS or all cores)")
                      ->check(CLI::PositiveNumber);
  }
  Config load() const {
    Config c = base_config(config);
    if (*threads_opt) c.pipeline.threads = threads;
    return c;
  }
};

struct CameraOptions {
  int width = 0;
  int height = 0;
  double fov = 0.0;
  CLI::Option* width_opt = nullptr;
  CLI::Option* height_opt = nullptr;
  CLI::Option* fov_opt = nullptr;

  void add(CLI::App* app) {
    width_opt = app->add_option("--width", width, "Perspective width in pixels");
    height_opt = app->add_option("--height", height, "Perspective height in pixels");
    fov_opt = app->add_option("--fov", fov, "Horizontal field of view in degrees");
  }
  void apply(PipelineConfig& p) const {
    if (*width_opt) p.width = width;
    if (*height_opt) p.height = height;
    if (*fov_opt) p.fov_deg = fov;
  }
};

struct MotionOptions {
  std::string kind;
  bool btf = false;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double spin_noise = 0.0;
  CLI::Option* kind_opt = nullptr;
  CLI::Option* theta_min_opt = nullptr;
  CLI::Option* theta_max_opt = nullptr;
  CLI::Option* spin_noise_opt = nullptr;

  void add(CLI::App* app, bool allow_any) {
    kind_opt = app->add_option("--motion", kind,
                               allow_any ? "Motion kind, or 'any' to draw one per sample" : "Motion kind");
    app->add_flag("--btf", btf, "Apply back-to-front symmetric editing");
    theta_min_opt = app->add_option("--theta-min", theta_min, "Lower angle bound (degrees)");
    theta_max_opt = app->add_option("--theta-max", theta_max, "Upper angle bound (degrees)");
    spin_noise_opt = app->add_option("--spin-noise", spin_noise, "Spin noise ratio in [0, 1]");
  }
  bool any() const { return *kind_opt && kind == "any"; }
  MotionSpec spec(const Config& cfg, std::optional<MotionKind> kind_override = std::nullopt) const {
    MotionKind k = cfg.motion.kind;
    if (kind_override) {
      k = *kind_override;
    } else if (*kind_opt) {
      k = parse_motion_kind(kind);
    }
    MotionSpec s = motion_for(cfg, k);
    if (btf) s.btf = true;
    if (*theta_min_opt) s.theta_min = theta_min;
    if (*theta_max_opt) s.theta_max = theta_max;
    if (*spin_noise_opt) s.spin_noise = spin_noise;
    s.validate();
    return s;
  }
};

// ---------------------------------------------------------------- curate

struct CurateArgs {
  Common common;
  std::string clip;
  std::string checks;
  std::string report;
  int strip = 0;
  CLI::Option* checks_opt = nullptr;
  CLI::Option* strip_opt = nullptr;

  void add(CLI::App* app) {
    common.add(app);
    app->add_option("clip", clip, "Directory of equirectangular frame_%05d.png files")->required();
    checks_opt = app->add_option("--checks", checks, "Comma-separated subset of seam,dynamics,poster");
    strip_opt = app->add_option("--strip", strip, "Seam strip width in pixels");
    app->add_option("--report", report, "Write the JSON report here instead of stdout");
  }
};

int cmd_curate(const CurateArgs& a, std::ostream& out, std::ostream& err) {
  Config cfg = a.common.load();
  CurationConfig& c = cfg.curation;
  if (*a.checks_opt) {
    c.check_seam = c.check_dynamics = c.check_poster = false;
    for (const auto& name : split_list(a.checks)) {
      if (name == "seam") {
        c.check_seam = true;
      } else if (name == "dynamics") {
        c.check_dynamics = true;
      } else if (name == "poster") {
        c.check_poster = true;
      } else {
        throw InvalidArgument("unknown check '" + name + "' (expected seam, dynamics or poster)");
      }
    }
  }
  if (*a.strip_opt) c.seam_strip = a.strip;
  if (!fs::is_directory(a.clip)) {
    err << "error: clip directory not found: " << a.clip << "\n";
    return kUsage;
  }
  const CurationReport report = curate_clip(a.clip, c);
  const std::string json = curation_report_to_json(report, a.clip);
  if (a.report.empty()) {
    out << json;
  } else {
    write_text_file(a.report, json);
    for (const auto& check : report.checks) {
      char line[96];
      std::snprintf(line, sizeof(line), "%-9s %10.4f  %s\n", check.name.c_str(), check.score,
                    check.pass ? "pass" : "FAIL");
      out << line;
    }
  }
  if (!report.pass) {
    err << "curation failed:";
    for (const auto& check : report.checks) {
      if (!check.pass) err << " " << check.name;
    }
    err << "\n";
  }
  return report.pass ? kOk : kCheckFailed;
}

// -------------------------------------------------------------- gen-traj

struct GenTrajArgs {
  Common common;
  CameraOptions camera;
  MotionOptions motion;
  int frames = 0;
  std::uint64_t seed = 0;
  std::string out;
  CLI::Option* frames_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App* app) {
    common.add(app);
    camera.add(app);
    motion.add(app, false);
    frames_opt = app->add_option("--frames", frames, "Trajectory length N");
    seed_opt = app->add_option("--seed", seed, "Random seed");
    app->add_option("--out", out, "Output trajectory JSON (default: stdout)");
  }
};

int cmd_gen_traj(const GenTrajArgs& a, std::ostream& out) {
  Config cfg = a.common.load();
  a.camera.apply(cfg.pipeline);
  if (*a.frames_opt) cfg.pipeline.frames = a.frames;
  if (*a.seed_opt) cfg.seed = a.seed;
  cfg.pipeline.validate();
  MotionSpec spec = a.motion.spec(cfg);
  spec.seed = cfg.seed;
  const TrajectoryFile file{generate(spec, cfg.pipeline.frames, Rotation::identity(), cfg.pipeline.intrinsics()), spec,
                            cfg.seed};
  if (a.out.empty()) {
    out << trajectory_to_json(file);
  } else {
    write_trajectory(file, a.out);
  }
  return kOk;
}

// -------------------------------------------------------------- resample

struct ResampleArgs {
  Common common;
  std::string input;
  std::string trajectory;
  std::string out;
  std::string viz;

  void add(CLI::App* app) {
    common.add(app);
    app->add_option("--input", input, "Equirectangular clip directory")->required();
    app->add_option("--trajectory", trajectory, "Trajectory JSON")->required();
    app->add_option("--out", out, "Output directory for perspective frames")->required();
    app->add_option("--viz-equirect", viz, "Also write equirect frames greyed outside the view");
  }
};

int cmd_resample(const ResampleArgs& a, std::ostream& out) {
  const Config cfg = a.common.load();
  const int threads = resolve_thread_count(cfg.pipeline.threads);
  const TrajectoryFile tf = read_trajectory(a.trajectory);
  const Trajectory& traj = tf.trajectory;
  const auto paths = list_clip_frames(a.input);
  if (paths.empty()) throw IoError("no frame_*.png files in " + a.input);
  const int n = static_cast<int>(traj.size());
  std::vector<int> idx;
  if (static_cast<int>(paths.size()) == n) {
    for (int i = 0; i < n; ++i) idx.push_back(i);
  } else {
    idx = subsample_indices(static_cast<int>(paths.size()), n);
  }
  std::vector<EquirectFrame> frames;
  for (int i : idx) frames.push_back(read_png_rgb(paths[static_cast<std::size_t>(i)]));
  const auto rendered = render_sequence(frames, traj.rotations, traj.intrinsics, threads);
  write_clip(rendered, a.out);
  if (!a.viz.empty()) {
    std::vector<RgbImage> viz;
    for (std::size_t t = 0; t < frames.size(); ++t) {
      viz.push_back(grey_outside(frames[t], frustum_on_equirect(traj.rotations[t], traj.intrinsics[t],
                                                                frames[t].grid(), threads)));
    }
    write_clip(viz, a.viz);
  }
  out << "wrote " << rendered.size() << " frames to " << a.out << "\n";
  return kOk;
}

// ---------------------------------------------------------- make-dataset

struct MakeDatasetArgs {
  Common common;
  CameraOptions camera;
  MotionOptions motion;
  std::string source;
  std::string tracks;
  std::string masks;
  std::string synth;
  std::string out;
  std::string clip_id;
  std::string category;
  int count = 1;
  int frames = 0;
  int queries = 0;
  double length_threshold = 0.0;
  std::uint64_t seed = 0;
  CLI::Option* frames_opt = nullptr;
  CLI::Option* queries_opt = nullptr;
  CLI::Option* threshold_opt = nullptr;
  CLI::Option* seed_opt = nullptr;

  void add(CLI::App* app) {
    common.add(app);
    camera.add(app);
    motion.add(app, true);
    auto* src = app->add_option("--source", source, "Equirectangular clip directory");
    auto* syn = app->add_option("--synth", synth, "Synthetic scene preset instead of --source");
    src->excludes(syn);
    app->add_option("--tracks", tracks, "Imported 2D track JSON")->needs(src);
    app->add_option("--masks", masks, "Equirect mask directory (frame_%05d.png)")->needs(src);
    app->add_option("--out", out, "Output directory")->required();
    app->add_option("--count", count, "Number of samples")->check(CLI::PositiveNumber);
    frames_opt = app->add_option("--frames", frames, "Sample length T");
    queries_opt = app->add_option("--queries", queries, "Query count N_q");
    threshold_opt = app->add_option("--length-threshold", length_threshold,
                                    "Cumulative length threshold L_thresh in pixels (negative: keep all)");
    seed_opt = app->add_option("--seed", seed, "Random seed");
    app->add_option("--clip-id", clip_id, "Clip identifier (default: source directory name)");
    app->add_option("--category", category, "Category tag stored in the metadata");
  }
};

SourceClip load_source(const MakeDatasetArgs& a, const Config& cfg, int threads) {
  SourceClip clip;
  if (!a.synth.empty()) {
    SceneSpec spec = SceneSpec::preset(a.synth);
    spec.frames = cfg.pipeline.frames;
    spec.seed = cfg.seed;
    SynthOutput s = render_scene(spec, threads);
    clip.clip_id = spec.clip_id;
    clip.category = spec.category;
    clip.source_ref = "synth:" + a.synth;
    clip.tracks = synth_imported_tracks(s, spec.grid);
    if (!s.masks.empty()) clip.masks = std::move(s.masks.front());
    clip.frames = std::move(s.frames);
  } else {
    if (a.source.empty()) throw InvalidArgument("one of --source or --synth is required");
    if (a.tracks.empty() && a.masks.empty()) throw InvalidArgument("--source needs --tracks and/or --masks");
    clip.clip_id = fs::path(a.source).filename().string();
    if (clip.clip_id.empty()) clip.clip_id = fs::path(a.source).parent_path().filename().string();
    clip.source_ref = a.source;
    clip.frames = read_clip(a.source);
    if (!a.masks.empty()) clip.masks = read_mask_clip(a.masks);
    if (!a.tracks.empty()) clip.tracks = read_imported_tracks(a.tracks);
  }
  if (!a.clip_id.empty()) clip.clip_id = a.clip_id;
  if (!a.category.empty()) clip.category = a.category;
  return clip;
}

int cmd_make_dataset(const MakeDatasetArgs& a, std::ostream& out) {
  Config cfg = a.common.load();
  a.camera.apply(cfg.pipeline);
  if (*a.frames_opt) cfg.pipeline.frames = a.frames;
  if (*a.queries_opt) cfg.pipeline.num_queries = a.queries;
  if (*a.threshold_opt) cfg.pipeline.length_threshold = a.length_threshold;
  if (*a.seed_opt) cfg.seed = a.seed;
  cfg.pipeline.validate();
  const int threads = resolve_thread_count(cfg.pipeline.threads);
  const SourceClip clip = load_source(a, cfg, threads);

  const KeyedRng rng(cfg.seed);
  const auto& kinds = all_motion_kinds();
  for (int i = 0; i < a.count; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    std::optional<MotionKind> kind;
    if (a.motion.any()) {
      kind = kinds[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(kinds.size()) - 1, index, kStreamSampleMotion))];
    }
    MotionSpec spec = a.motion.spec(cfg, kind);
    spec.seed = rng.derive(index, kStreamMotionSeed);
    SourceClip sample_clip = clip;
    char id[24];
    std::snprintf(id, sizeof(id), "_%05d", i);
    sample_clip.clip_id = clip.clip_id + id;
    PipelineConfig pc = cfg.pipeline;
    pc.threads = threads;
    const DatasetSample sample = assemble_sample(sample_clip, spec, pc, rng.derive(index, kStreamSampleSeed));
    char dir[32];
    std::snprintf(dir, sizeof(dir), "sample_%05d", i);
    write_sample(sample, fs::path(a.out) / dir);
    out << dir << ": " << to_string(spec.kind) << (spec.btf ? "+btf" : "") << ", " << sample.tracks.tracks.size()
        << " tracks, " << sample.tracks.out_of_frame_count() << " of "
        << sample.tracks.tracks.size() * static_cast<std::size_t>(sample.tracks.frames) << " points out of frame\n";
  }
  return kOk;
}

// ------------------------------------------------------------------ eval

struct EvalArgs {
  Common common;
  std::string pred;
  std::string gt;
  std::string report;
  double degrees_per_pixel = 0.0;
  CLI::Option* dpp_opt = nullptr;

  void add(CLI::App* app) {
    common.add(app);
    app->add_option("--pred", pred, "Predicted tracks (file or directory)")->required();
    app->add_option("--gt", gt, "Ground-truth tracks (file or directory)")->required();
    app->add_option("--report", report, "Write the JSON report here");
    dpp_opt = app->add_option("--degrees-per-pixel", degrees_per_pixel, "Angular size of one px° threshold unit");
  }
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  Config cfg = a.common.load();
  if (*a.dpp_opt) cfg.thresholds.degrees_per_pixel = a.degrees_per_pixel;
  const auto pred = read_track_sets(a.pred);
  const auto gt = read_track_sets(a.gt);
  const EvalReport report = evaluate(pred, gt, cfg.thresholds);
  out << render_table(report);
  if (!a.report.empty()) write_text_file(a.report, eval_report_to_json(report));
  return kOk;
}

// ----------------------------------------------------------------- synth

struct SynthArgs {
  Common common;
  std::string preset = "single-marker";
  std::string out;
  std::string path;
  std::string background;
  int frames = 0;
  int width = 0;
  int height = 0;
  int track_points = 0;
  std::uint64_t seed = 0;
  double speed = 0.0;
  double radius = 0.0;
  double lon = 0.0;
  double lat = 0.0;
  double background_speed = 0.0;
  CLI::Option* path_opt = nullptr;
  CLI::Option* background_opt = nullptr;
  CLI::Option* frames_opt = nullptr;
  CLI::Option* width_opt = nullptr;
  CLI::Option* height_opt = nullptr;
  CLI::Option* points_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* speed_opt = nullptr;
  CLI::Option* radius_opt = nullptr;
  CLI::Option* lon_opt = nullptr;
  CLI::Option* lat_opt = nullptr;
  CLI::Option* bg_speed_opt = nullptr;

  void add(CLI::App* app) {
    common.add(app);
    app->add_option("--preset", preset, "single-marker, great-circle, lissajous or static");
    app->add_option("--out", out, "Output directory")->required();
    path_opt = app->add_option("--path", path, "Marker path: great-circle, small-circle, static, lissajous");
    background_opt = app->add_option("--background", background, "gradient or checker");
    frames_opt = app->add_option("--frames", frames, "Frame count");
    width_opt = app->add_option("--width", width, "Equirect width");
    height_opt = app->add_option("--height", height, "Equirect height");
    points_opt = app->add_option("--track-points", track_points, "Tracked points per marker besides the centre");
    seed_opt = app->add_option("--seed", seed, "Random seed");
    speed_opt = app->add_option("--speed", speed, "Marker speed, degrees per frame");
    radius_opt = app->add_option("--radius", radius, "Marker radius in degrees");
    lon_opt = app->add_option("--lon", lon, "Initial marker longitude in degrees");
    lat_opt = app->add_option("--lat", lat, "Initial marker latitude in degrees");
    bg_speed_opt = app->add_option("--background-speed", background_speed, "Background drift, degrees per frame");
  }
};

int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const Config cfg = a.common.load();
  SceneSpec spec = SceneSpec::preset(a.preset);
  spec.seed = cfg.seed;
  if (*a.frames_opt) spec.frames = a.frames;
  if (*a.width_opt) spec.grid.width = a.width;
  if (*a.height_opt) spec.grid.height = a.height;
  if (*a.points_opt) spec.track_points = a.track_points;
  if (*a.seed_opt) spec.seed = a.seed;
  if (*a.bg_speed_opt) spec.background_speed = a.background_speed;
  if (*a.background_opt) {
    if (a.background == "gradient") {
      spec.background = BackgroundKind::Gradient;
    } else if (a.background == "checker") {
      spec.background = BackgroundKind::Checker;
    } else {
      throw InvalidArgument("unknown background '" + a.background + "'");
    }
  }
  MarkerSpec& m = spec.markers.front();
  if (*a.path_opt) m.path = parse_path_kind(a.path);
  if (*a.speed_opt) m.speed_deg = a.speed;
  if (*a.radius_opt) m.radius_deg = a.radius;
  if (*a.lon_opt) m.lon_deg = a.lon;
  if (*a.lat_opt) m.lat_deg = a.lat;
  const SynthOutput s = render_scene(spec, resolve_thread_count(cfg.pipeline.threads));
  write_synth(s, spec, a.out);
  out << "wrote " << s.frames.size() << " frames, " << s.tracks.size() << " tracks to " << a.out << "\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Panoramic point-track dataset toolkit", "pano-track"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  CurateArgs curate;
  GenTrajArgs gen_traj;
  ResampleArgs resample;
  MakeDatasetArgs make_dataset;
  EvalArgs eval;
  SynthArgs synth;
  auto* c_curate = app.add_subcommand("curate", "Seam, dynamics and poster checks for an equirect clip");
  auto* c_gen = app.add_subcommand("gen-traj", "Generate a camera trajectory");
  auto* c_resample = app.add_subcommand("resample", "Render perspective frames along a trajectory");
  auto* c_make = app.add_subcommand("make-dataset", "Assemble dataset samples");
  auto* c_eval = app.add_subcommand("eval", "Score predicted direction tracks");
  auto* c_synth = app.add_subcommand("synth", "Render a synthetic scene with analytic tracks");
  curate.add(c_curate);
  gen_traj.add(c_gen);
  resample.add(c_resample);
  make_dataset.add(c_make);
  eval.add(c_eval);
  synth.add(c_synth);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run 'pano-track --help' for usage\n";
    return kUsage;
  }
  for (auto* sub : app.get_subcommands()) {
    if (sub->get_help_ptr() != nullptr && sub->get_help_ptr()->count() > 0) {
      out << sub->help();
      return kOk;
    }
  }

  try {
    if (c_curate->parsed()) return cmd_curate(curate, out, err);
    if (c_gen->parsed()) return cmd_gen_traj(gen_traj, out);
    if (c_resample->parsed()) return cmd_resample(resample, out);
    if (c_make->parsed()) return cmd_make_dataset(make_dataset, out);
    if (c_eval->parsed()) return cmd_eval(eval, out);
    if (c_synth->parsed()) return cmd_synth(synth, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace panotrack::cli
