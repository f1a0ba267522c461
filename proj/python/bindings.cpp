#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>
#include <sstream>

#include "cli.hpp"
#include "panotrack/curation.hpp"
#include "panotrack/error.hpp"
#include "panotrack/io.hpp"
#include "panotrack/metrics.hpp"
#include "panotrack/motion.hpp"
#include "panotrack/resample.hpp"
#include "panotrack/synth.hpp"

namespace py = pybind11;
using namespace panotrack;

namespace {

using Vec3Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ImageArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

py::array_t<double> to_array(const Vec3& v) {
  py::array_t<double> out(3);
  auto r = out.mutable_unchecked<1>();
  r(0) = v.x;
  r(1) = v.y;
  r(2) = v.z;
  return out;
}

py::array_t<double> to_array(const Rotation& rot) {
  py::array_t<double> out({3, 3});
  std::memcpy(out.mutable_data(), rot.matrix().data(), sizeof(double) * 9);
  return out;
}

Mat3 to_mat3(const Vec3Array& a) {
  if (a.ndim() != 2 || a.shape(0) != 3 || a.shape(1) != 3) throw InvalidArgument("expected a 3x3 array");
  Mat3 m;
  std::memcpy(m.data(), a.data(), sizeof(double) * 9);
  return m;
}

UnitDirection to_direction(const Vec3Array& a) {
  if (a.size() != 3) throw InvalidArgument("expected a 3-vector");
  const double* p = a.data();
  return UnitDirection(p[0], p[1], p[2]);
}

RgbImage to_image(const ImageArray& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw InvalidArgument("expected an H x W x 3 uint8 array");
  const auto h = static_cast<int>(a.shape(0));
  const auto w = static_cast<int>(a.shape(1));
  return RgbImage(w, h, std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

py::array_t<std::uint8_t> from_image(const RgbImage& img) {
  py::array_t<std::uint8_t> out({img.height(), img.width(), 3});
  std::memcpy(out.mutable_data(), img.data().data(), img.data().size());
  return out;
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Panoramic point-track toolkit: sphere geometry, resampling, trajectories, metrics";

  static py::exception<Error> base(m, "PanotrackError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<Intrinsics>(m, "Intrinsics")
      .def(py::init<>())
      .def(py::init([](double fx, double fy, double cx, double cy, int width, int height) {
             Intrinsics k{fx, fy, cx, cy, width, height};
             k.validate();
             return k;
           }),
           py::arg("fx"), py::arg("fy"), py::arg("cx"), py::arg("cy"), py::arg("width"), py::arg("height"))
      .def_static("from_fov", &Intrinsics::from_fov, py::arg("width"), py::arg("height"), py::arg("fov_deg"))
      .def_readwrite("fx", &Intrinsics::fx)
      .def_readwrite("fy", &Intrinsics::fy)
      .def_readwrite("cx", &Intrinsics::cx)
      .def_readwrite("cy", &Intrinsics::cy)
      .def_readwrite("width", &Intrinsics::width)
      .def_readwrite("height", &Intrinsics::height)
      .def_property_readonly("horizontal_fov_deg", &Intrinsics::horizontal_fov_deg)
      .def("__repr__", [](const Intrinsics& k) {
        std::ostringstream os;
        os << "Intrinsics(fx=" << k.fx << ", fy=" << k.fy << ", cx=" << k.cx << ", cy=" << k.cy
           << ", width=" << k.width << ", height=" << k.height << ")";
        return os.str();
      });

  m.def(
      "pixel_to_direction",
      [](double x, double y, const Intrinsics& k) { return to_array(pixel_to_direction({x, y}, k).vec()); },
      py::arg("x"), py::arg("y"), py::arg("intrinsics"), "Unit ray through continuous pixel (x, y).");
  m.def(
      "direction_to_pixel",
      [](const Vec3Array& d, const Intrinsics& k) -> py::object {
        const Projection p = direction_to_pixel(to_direction(d), k);
        if (!p.in_front) return py::none();
        return py::make_tuple(p.pixel.x, p.pixel.y);
      },
      py::arg("direction"), py::arg("intrinsics"), "(x, y), or None behind the camera.");
  m.def(
      "equirect_to_direction",
      [](double u, double v, int width, int height) {
        return to_array(equirect_to_direction({u, v}, {width, height}).vec());
      },
      py::arg("u"), py::arg("v"), py::arg("width"), py::arg("height"));
  m.def(
      "direction_to_equirect",
      [](const Vec3Array& d, int width, int height) {
        const EquirectCoord c = direction_to_equirect(to_direction(d), {width, height});
        return py::make_tuple(c.u, c.v);
      },
      py::arg("direction"), py::arg("width"), py::arg("height"));
  m.def(
      "angular_distance",
      [](const Vec3Array& a, const Vec3Array& b) { return angular_distance(to_direction(a), to_direction(b)); },
      py::arg("a"), py::arg("b"), "Degrees.");
  m.def(
      "euler_to_rotation",
      [](double pitch, double roll, double yaw) { return to_array(euler_to_rotation({pitch, roll, yaw})); },
      py::arg("pitch"), py::arg("roll"), py::arg("yaw"), "Rx(pitch) Ry(yaw) Rz(roll), degrees.");
  m.def(
      "procrustes_so3", [](const Vec3Array& a) { return to_array(procrustes_so3(to_mat3(a))); }, py::arg("m"),
      "Nearest rotation in Frobenius norm.");

  m.def(
      "render_perspective",
      [](const ImageArray& equirect, const Vec3Array& rotation, const Intrinsics& k, int threads) {
        const RgbImage src = to_image(equirect);
        const Rotation r = Rotation::from_matrix(to_mat3(rotation), 1e-6);
        RgbImage out;
        {
          py::gil_scoped_release release;
          out = render_perspective(src, r, k, threads);
        }
        return from_image(out);
      },
      py::arg("equirect"), py::arg("rotation"), py::arg("intrinsics"), py::arg("threads") = 1);

  m.def(
      "generate_trajectory",
      [](const std::string& kind, int frames, std::uint64_t seed, const Intrinsics& k, bool btf, double spin_noise) {
        MotionSpec spec = MotionSpec::defaults(parse_motion_kind(kind));
        spec.seed = seed;
        spec.btf = btf;
        spec.spin_noise = spin_noise;
        const Trajectory t = generate(spec, frames, Rotation{}, k);
        py::array_t<double> out({static_cast<py::ssize_t>(t.size()), py::ssize_t{3}, py::ssize_t{3}});
        double* dst = out.mutable_data();
        for (const auto& r : t.rotations) {
          std::memcpy(dst, r.matrix().data(), sizeof(double) * 9);
          dst += 9;
        }
        return out;
      },
      py::arg("kind"), py::arg("frames"), py::arg("seed") = 0, py::arg("intrinsics") = Intrinsics::from_fov(256, 256, 70.528),
      py::arg("btf") = false, py::arg("spin_noise") = 0.25, "Camera-to-world rotations, shape (frames, 3, 3).");

  m.def(
      "seam_check", [](const ImageArray& frame, int strip) { return seam_check(to_image(frame), strip); },
      py::arg("frame"), py::arg("strip") = 8);
  m.def(
      "dynamics_check",
      [](const std::vector<ImageArray>& frames) {
        std::vector<RgbImage> imgs;
        for (const auto& f : frames) imgs.push_back(to_image(f));
        return dynamics_check(imgs);
      },
      py::arg("frames"));
  m.def(
      "poster_check",
      [](const ImageArray& frame) {
        const PosterResult r = poster_check(to_image(frame));
        py::dict d;
        d["flagged"] = r.flagged;
        d["box"] = py::make_tuple(r.box.x0, r.box.y0, r.box.x1, r.box.y1);
        d["box_fraction"] = r.box_fraction;
        d["border_mean"] = r.border_mean;
        return d;
      },
      py::arg("frame"));
  m.def(
      "curate_clip",
      [](const std::filesystem::path& dir) {
        return json_loads(curation_report_to_json(curate_clip(dir, CurationConfig{}), dir.string()));
      },
      py::arg("clip_dir"), "Runs seam, dynamics and poster checks with default thresholds.");

  m.def(
      "evaluate",
      [](const std::filesystem::path& pred, const std::filesystem::path& gt, double degrees_per_pixel) {
        ThresholdConfig cfg;
        cfg.degrees_per_pixel = degrees_per_pixel;
        const auto p = read_track_sets(pred);
        const auto g = read_track_sets(gt);
        return json_loads(eval_report_to_json(evaluate(p, g, cfg)));
      },
      py::arg("pred"), py::arg("gt"), py::arg("degrees_per_pixel") = 0.2755,
      "Scores predicted track files against ground truth; returns the report as a dict.");

  m.def(
      "write_synth",
      [](const std::string& preset, const std::filesystem::path& out, int frames, int width, int height,
         std::uint64_t seed) {
        SceneSpec spec = SceneSpec::preset(preset);
        spec.frames = frames;
        spec.grid = {width, height};
        spec.seed = seed;
        SynthOutput s;
        {
          py::gil_scoped_release release;
          s = render_scene(spec);
          write_synth(s, spec, out);
        }
      },
      py::arg("preset"), py::arg("out"), py::arg("frames") = 32, py::arg("width") = 1024, py::arg("height") = 512,
      py::arg("seed") = 0);

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        int rc = 0;
        {
          py::gil_scoped_release release;
          rc = cli::run(args, out, err);
        }
        return py::make_tuple(rc, out.str(), err.str());
      },
      py::arg("args"), "Runs one pano-track command; returns (exit_code, stdout, stderr).");
}
