#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "doorsom/canny.hpp"
#include "doorsom/doorfeat.hpp"
#include "doorsom/image.hpp"
#include "doorsom/linefit.hpp"
#include "doorsom/som.hpp"
#include "doorsom/synth.hpp"

namespace doorsom {

struct PipelineConfig {
    CannyParams canny;
    LinefitParams linefit;
    FeatureParams feat;
    TrainSchedule schedule;
    int som_rows = 8;
    int som_cols = 8;
    double iou_threshold = 0.5;
};

struct DoorModel {
    std::uint32_t format_version = 1;
    SomLattice lattice;
    NeuronLabelMap labels;
    NormalizationStats norm;
    PipelineConfig cfg;
};

struct Detection {
    int cls = 0;  // classify() output: 1 = door
    DoorCandidate candidate;
    BoxD region;
};

struct DetectionResult {
    int width = 0;
    int height = 0;
    std::vector<Detection> detections;

    // Door-classified post segments rasterized into a binary image.
    EdgeMap line_raster() const;
};

struct LabeledImage {
    GrayImage image;
    GroundTruth truth;
};

struct Corpus {
    std::vector<LabeledImage> images;
};

Corpus load_corpus(const std::string& dir);

BoxD truth_box(const GroundTruth& t);

struct TrainingDiagnostics {
    int images = 0;
    int candidates = 0;
    int door_candidates = 0;
    int nondoor_candidates = 0;
    std::vector<CurvePoint> error_curve;     // quantization error vs iteration
    std::vector<CurvePoint> misclass_curve;  // qe field holds the misclassified fraction
};

DoorModel train_model(const Corpus& corpus, const PipelineConfig& cfg, std::uint64_t seed,
                      TrainingDiagnostics* diag = nullptr);

DetectionResult detect_doors(const GrayImage& img, const DoorModel& model);

// One convergence-rate SOM step on the candidate best overlapping the truth
// box; returns false when the frame yields no candidate.
bool online_update(DoorModel& model, const GrayImage& img, const BoxD& truth);

std::vector<std::uint8_t> save_model(const DoorModel& model);
DoorModel load_model(std::span<const std::uint8_t> bytes);
void save_model_file(const std::string& path, const DoorModel& model);
DoorModel load_model_file(const std::string& path);

struct EvalCategory {
    Lighting category = Lighting::day;
    int images = 0;
    int detected = 0;        // images with at least one true-positive detection
    int doors = 0;
    int doors_detected = 0;
};

struct EvalImageLog {
    Lighting category = Lighting::day;
    int index = 0;
    bool detected = false;
    int detections = 0;  // door-classified candidates in the image
};

struct EvalReport {
    std::vector<EvalCategory> categories;
    std::vector<EvalImageLog> images;

    std::string to_table() const;
};

EvalReport evaluate_corpus(const DoorModel& model, const Corpus& corpus);

struct BenchReport {
    double full_train_s = 0.0;      // one complete training run
    double train_step_s = 0.0;      // median single weight update
    double classify_s = 0.0;        // median single-vector classification
    int train_step_reps = 0;
    int classify_reps = 0;

    std::string to_table() const;
};

BenchReport bench(const DoorModel& model, const GrayImage& img, int classify_reps = 1000,
                  int step_reps = 100);

RgbImage render_overlay(const GrayImage& img, const DetectionResult& result);

}  // namespace doorsom
