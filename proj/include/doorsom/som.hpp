#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace doorsom {

struct NodeIndex {
    int row = 0;
    int col = 0;
    bool operator==(const NodeIndex&) const = default;
};

struct SomLattice {
    int rows = 0;
    int cols = 0;
    int dim = 0;
    std::vector<double> weights;  // node-major: (row * cols + col) * dim + k

    SomLattice() = default;
    SomLattice(int r, int c, int d);

    std::span<double> node(int r, int c) {
        return {weights.data() + (static_cast<std::size_t>(r) * cols + c) * dim,
                static_cast<std::size_t>(dim)};
    }
    std::span<const double> node(int r, int c) const {
        return {weights.data() + (static_cast<std::size_t>(r) * cols + c) * dim,
                static_cast<std::size_t>(dim)};
    }
    bool operator==(const SomLattice&) const = default;
};

SomLattice init_lattice(int rows, int cols, int dim, std::uint64_t seed);

struct TrainSchedule {
    double eta0_order = 0.12;  // ordering-phase initial learning rate
    double eta_conv = 0.001;   // constant convergence-phase learning rate
    double sigma0 = 4.0;       // initial neighborhood spread
    double tau_sigma = 0.21;   // spread time constant
    double tau_eta = 0.30;     // learning-rate time constant
    double h0 = 1.0;           // neighborhood amplitude
    double sigma_min = 0.5;    // convergence spread ceiling
    int total_iters = 6272;
    double order_frac = 0.25;  // fraction of iterations in the ordering phase
    int eval_every = 98;       // error-curve sampling stride

    void validate() const;
    int ordering_iters() const;
    // Spread held constant in convergence, capped so the schedule never
    // increases across the phase boundary.
    double conv_sigma() const;
};

struct ScheduleValue {
    double eta = 0.0;
    double sigma = 0.0;
};

ScheduleValue schedule_at(const TrainSchedule& s, int n);

NodeIndex best_matching_unit(const SomLattice& l, std::span<const double> x);

void train_step(SomLattice& l, std::span<const double> x, double eta, double sigma, double h0);
void train_step(SomLattice& l, std::span<const double> x, const TrainSchedule& s, int n);

double quantization_error(const SomLattice& l, std::span<const std::vector<double>> data);

struct CurvePoint {
    int iter = 0;
    double qe = 0.0;
};

using TrainObserver = std::function<void(int iter, const SomLattice&)>;

std::vector<CurvePoint> train(SomLattice& l, std::span<const std::vector<double>> data,
                              const TrainSchedule& s, std::uint64_t seed,
                              const TrainObserver& observer = nullptr);

struct NeuronLabelMap {
    int rows = 0;
    int cols = 0;
    std::vector<std::uint8_t> labels;  // 0 = non-door, 1 = door

    int at(int r, int c) const { return labels[static_cast<std::size_t>(r) * cols + c]; }
    bool operator==(const NeuronLabelMap&) const = default;
};

struct LabeledVector {
    std::vector<double> x;
    int label = 0;  // 0 or 1
};

NeuronLabelMap calibrate_labels(const SomLattice& l, std::span<const LabeledVector> labeled);

int classify(const SomLattice& l, const NeuronLabelMap& map, std::span<const double> x);

}  // namespace doorsom
