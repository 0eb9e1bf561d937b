#include <cstring>
#include <stdexcept>
#include <string>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "doorsom/canny.hpp"
#include "doorsom/linefit.hpp"
#include "doorsom/pipeline.hpp"
#include "doorsom/pnm.hpp"
#include "doorsom/synth.hpp"

namespace py = pybind11;
using namespace doorsom;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

GrayImage to_image(const U8Array& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-d uint8 array");
    GrayImage img(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::memcpy(img.data.data(), a.data(), img.data.size());
    return img;
}

}  // namespace

PYBIND11_MODULE(_doorsom, m) {
    m.doc() = "door detection: Canny edges, line fitting, and a Kohonen SOM classifier";

    m.def(
        "synth",
        [](const std::string& out_dir, int n, std::uint64_t seed, int width, int height) {
            return static_cast<int>(generate_corpus(out_dir, n, seed, width, height).size());
        },
        py::arg("out_dir"), py::arg("n"), py::arg("seed") = 1, py::arg("width") = 320,
        py::arg("height") = 240,
        "Generate a labeled synthetic corpus; returns the number of images written");

    m.def(
        "train",
        [](const std::string& corpus_dir, const std::string& model_path, std::uint64_t seed) {
            Corpus corpus = load_corpus(corpus_dir);
            TrainingDiagnostics diag;
            DoorModel model = train_model(corpus, PipelineConfig{}, seed, &diag);
            save_model_file(model_path, model);
            py::dict d;
            d["images"] = diag.images;
            d["candidates"] = diag.candidates;
            d["door_candidates"] = diag.door_candidates;
            d["nondoor_candidates"] = diag.nondoor_candidates;
            d["final_qe"] = diag.error_curve.empty() ? 0.0 : diag.error_curve.back().qe;
            return d;
        },
        py::arg("corpus_dir"), py::arg("model_path"), py::arg("seed") = 1,
        "Train a door model on a labeled corpus and write it to model_path");

    m.def(
        "detect",
        [](const std::string& model_path, const std::string& image_path) {
            DoorModel model = load_model_file(model_path);
            GrayImage img = to_gray(load_pnm_file(image_path));
            py::list out;
            for (const Detection& det : detect_doors(img, model).detections) {
                py::dict d;
                d["cls"] = det.cls;
                d["x0"] = det.region.x0;
                d["y0"] = det.region.y0;
                d["x1"] = det.region.x1;
                d["y1"] = det.region.y1;
                out.append(d);
            }
            return out;
        },
        py::arg("model_path"), py::arg("image_path"),
        "Detect doors in one PGM/PPM image; returns one record per candidate");

    m.def(
        "evaluate",
        [](const std::string& model_path, const std::string& corpus_dir) {
            DoorModel model = load_model_file(model_path);
            return evaluate_corpus(model, load_corpus(corpus_dir)).to_table();
        },
        py::arg("model_path"), py::arg("corpus_dir"),
        "Evaluate a model over a labeled corpus; returns the per-category table");

    m.def(
        "bench",
        [](const std::string& model_path, const std::string& image_path, int reps,
           int step_reps) {
            DoorModel model = load_model_file(model_path);
            GrayImage img = to_gray(load_pnm_file(image_path));
            BenchReport r = bench(model, img, reps, step_reps);
            py::dict d;
            d["full_train_s"] = r.full_train_s;
            d["train_step_s"] = r.train_step_s;
            d["classify_s"] = r.classify_s;
            d["train_step_reps"] = r.train_step_reps;
            d["classify_reps"] = r.classify_reps;
            return d;
        },
        py::arg("model_path"), py::arg("image_path"), py::arg("reps") = 1000,
        py::arg("step_reps") = 100, "Time training, updates, and classification");

    m.def(
        "online_update",
        [](const std::string& model_path, const std::string& image_path, double x0, double y0,
           double x1, double y1, const std::string& out_path) {
            DoorModel model = load_model_file(model_path);
            GrayImage img = to_gray(load_pnm_file(image_path));
            bool applied = online_update(model, img, BoxD{x0, y0, x1, y1});
            save_model_file(out_path, model);
            return applied;
        },
        py::arg("model_path"), py::arg("image_path"), py::arg("x0"), py::arg("y0"),
        py::arg("x1"), py::arg("y1"), py::arg("out_path"),
        "One SOM step against a labeled frame; returns False when no candidate matched");

    m.def(
        "canny",
        [](const U8Array& a, double sigma, double low_frac, double high_frac) {
            GrayImage img = to_image(a);
            EdgeMap e = canny(img, CannyParams{sigma, low_frac, high_frac});
            py::array_t<bool> out({e.height, e.width});
            bool* dst = out.mutable_data();
            for (std::size_t i = 0; i < e.edge.size(); ++i) dst[i] = e.edge[i] != 0;
            return out;
        },
        py::arg("image"), py::arg("sigma") = CannyParams{}.sigma,
        py::arg("low_frac") = CannyParams{}.low_frac,
        py::arg("high_frac") = CannyParams{}.high_frac,
        "Canny edge map of a 2-d uint8 array as a bool array");

    m.def(
        "detect_lines",
        [](const U8Array& a) {
            GrayImage img = to_image(a);
            std::vector<LineSegment> segs = detect_lines(canny(img));
            py::array_t<double> out({static_cast<py::ssize_t>(segs.size()), py::ssize_t{4}});
            double* dst = out.mutable_data();
            for (std::size_t i = 0; i < segs.size(); ++i) {
                dst[4 * i + 0] = segs[i].p0.x;
                dst[4 * i + 1] = segs[i].p0.y;
                dst[4 * i + 2] = segs[i].p1.x;
                dst[4 * i + 3] = segs[i].p1.y;
            }
            return out;
        },
        py::arg("image"), "Fitted line segments of a 2-d uint8 array, one (x0, y0, x1, y1) row each");
}
