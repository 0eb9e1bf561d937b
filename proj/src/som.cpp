#include "doorsom/som.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "doorsom/rng.hpp"

namespace doorsom {

SomLattice::SomLattice(int r, int c, int d) : rows(r), cols(c), dim(d) {
    if (r < 1 || c < 1 || d < 1)
        throw std::invalid_argument("SomLattice: dimensions must be positive");
    weights.resize(static_cast<std::size_t>(r) * c * d, 0.0);
}

SomLattice init_lattice(int rows, int cols, int dim, std::uint64_t seed) {
    SomLattice l(rows, cols, dim);
    SplitMix64 rng(seed);
    for (double& w : l.weights) w = rng.uniform();
    return l;
}

void TrainSchedule::validate() const {
    if (!(eta_conv > 0 && eta_conv < eta0_order && eta0_order < 1))
        throw std::invalid_argument("TrainSchedule: need 0 < eta_conv < eta0_order < 1");
    if (!(sigma0 > 0) || !(sigma_min > 0))
        throw std::invalid_argument("TrainSchedule: spreads must be positive");
    if (!(tau_sigma > 0) || !(tau_eta > 0))
        throw std::invalid_argument("TrainSchedule: time constants must be positive");
    if (!(order_frac > 0 && order_frac < 1))
        throw std::invalid_argument("TrainSchedule: order_frac must be in (0, 1)");
    if (total_iters < 1) throw std::invalid_argument("TrainSchedule: total_iters must be >= 1");
    if (!(h0 > 0) || eta0_order * h0 > 1.0)
        throw std::invalid_argument("TrainSchedule: need 0 < h0 and eta0_order * h0 <= 1");
    if (eval_every < 1) throw std::invalid_argument("TrainSchedule: eval_every must be >= 1");
}

int TrainSchedule::ordering_iters() const {
    return std::max(1, static_cast<int>(std::lround(order_frac * total_iters)));
}

double TrainSchedule::conv_sigma() const {
    return std::min(sigma_min, sigma0 * std::exp(-1.0 / tau_sigma));
}

ScheduleValue schedule_at(const TrainSchedule& s, int n) {
    if (n < 0 || n >= s.total_iters) throw std::invalid_argument("schedule_at: n out of range");
    int oi = s.ordering_iters();
    if (n < oi) {
        double p = static_cast<double>(n) / oi;
        return {s.eta0_order * std::exp(-p / s.tau_eta), s.sigma0 * std::exp(-p / s.tau_sigma)};
    }
    return {s.eta_conv, s.conv_sigma()};
}

NodeIndex best_matching_unit(const SomLattice& l, std::span<const double> x) {
    if (static_cast<int>(x.size()) != l.dim)
        throw std::invalid_argument("best_matching_unit: dimension mismatch");
    NodeIndex best{0, 0};
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int r = 0; r < l.rows; ++r)
        for (int c = 0; c < l.cols; ++c) {
            std::span<const double> w = l.node(r, c);
            double d2 = 0.0;
            for (int k = 0; k < l.dim; ++k) {
                double e = x[static_cast<std::size_t>(k)] - w[static_cast<std::size_t>(k)];
                d2 += e * e;
            }
            if (d2 < best_d2) {
                best_d2 = d2;
                best = {r, c};
            }
        }
    return best;
}

void train_step(SomLattice& l, std::span<const double> x, double eta, double sigma, double h0) {
    NodeIndex bmu = best_matching_unit(l, x);
    for (int r = 0; r < l.rows; ++r)
        for (int c = 0; c < l.cols; ++c) {
            double d2 = static_cast<double>(r - bmu.row) * (r - bmu.row) +
                        static_cast<double>(c - bmu.col) * (c - bmu.col);
            double h;
            if (sigma > 0)
                h = h0 * std::exp(-d2 / (sigma * sigma));
            else
                h = d2 == 0 ? h0 : 0.0;
            if (h == 0.0) continue;
            double f = eta * h;
            std::span<double> w = l.node(r, c);
            for (int k = 0; k < l.dim; ++k)
                w[static_cast<std::size_t>(k)] +=
                    f * (x[static_cast<std::size_t>(k)] - w[static_cast<std::size_t>(k)]);
        }
}

void train_step(SomLattice& l, std::span<const double> x, const TrainSchedule& s, int n) {
    ScheduleValue v = schedule_at(s, n);
    train_step(l, x, v.eta, v.sigma, s.h0);
}

double quantization_error(const SomLattice& l, std::span<const std::vector<double>> data) {
    if (data.empty()) throw std::invalid_argument("quantization_error: empty data");
    double sum = 0.0;
    for (const std::vector<double>& x : data) {
        if (static_cast<int>(x.size()) != l.dim)
            throw std::invalid_argument("quantization_error: dimension mismatch");
        double best_d2 = std::numeric_limits<double>::infinity();
        for (int r = 0; r < l.rows; ++r)
            for (int c = 0; c < l.cols; ++c) {
                std::span<const double> w = l.node(r, c);
                double d2 = 0.0;
                for (int k = 0; k < l.dim; ++k) {
                    double e = x[static_cast<std::size_t>(k)] - w[static_cast<std::size_t>(k)];
                    d2 += e * e;
                }
                best_d2 = std::min(best_d2, d2);
            }
        sum += std::sqrt(best_d2);
    }
    return sum / static_cast<double>(data.size());
}

std::vector<CurvePoint> train(SomLattice& l, std::span<const std::vector<double>> data,
                              const TrainSchedule& s, std::uint64_t seed,
                              const TrainObserver& observer) {
    s.validate();
    if (data.empty()) throw std::invalid_argument("train: empty data");
    for (const auto& x : data)
        if (static_cast<int>(x.size()) != l.dim)
            throw std::invalid_argument("train: dimension mismatch");

    SplitMix64 rng(seed);
    std::vector<CurvePoint> curve;
    curve.push_back({0, quantization_error(l, data)});
    for (int n = 0; n < s.total_iters; ++n) {
        const std::vector<double>& x = data[static_cast<std::size_t>(rng.below(data.size()))];
        train_step(l, x, s, n);
        if ((n + 1) % s.eval_every == 0 || n + 1 == s.total_iters) {
            curve.push_back({n + 1, quantization_error(l, data)});
            if (observer) observer(n + 1, l);
        }
    }
    return curve;
}

NeuronLabelMap calibrate_labels(const SomLattice& l, std::span<const LabeledVector> labeled) {
    bool has0 = false, has1 = false;
    for (const LabeledVector& lv : labeled) (lv.label ? has1 : has0) = true;
    if (!has0 || !has1)
        throw std::invalid_argument("calibrate_labels: calibration set must contain both classes");

    std::size_t n = static_cast<std::size_t>(l.rows) * l.cols;
    std::vector<int> votes0(n, 0), votes1(n, 0);
    for (const LabeledVector& lv : labeled) {
        NodeIndex b = best_matching_unit(l, lv.x);
        std::size_t i = static_cast<std::size_t>(b.row) * l.cols + b.col;
        ++(lv.label ? votes1 : votes0)[i];
    }

    NeuronLabelMap map;
    map.rows = l.rows;
    map.cols = l.cols;
    map.labels.assign(n, 0);
    std::vector<std::uint8_t> won(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        if (votes0[i] + votes1[i] > 0) {
            won[i] = 1;
            map.labels[i] = votes1[i] >= votes0[i] ? 1 : 0;
        }

    // Nodes nobody won inherit from the closest winning node on the grid.
    for (int r = 0; r < l.rows; ++r)
        for (int c = 0; c < l.cols; ++c) {
            std::size_t i = static_cast<std::size_t>(r) * l.cols + c;
            if (won[i]) continue;
            long best_d2 = std::numeric_limits<long>::max();
            std::size_t best_j = 0;
            for (int rr = 0; rr < l.rows; ++rr)
                for (int cc = 0; cc < l.cols; ++cc) {
                    std::size_t j = static_cast<std::size_t>(rr) * l.cols + cc;
                    if (!won[j]) continue;
                    long d2 = static_cast<long>(rr - r) * (rr - r) +
                              static_cast<long>(cc - c) * (cc - c);
                    if (d2 < best_d2) {
                        best_d2 = d2;
                        best_j = j;
                    }
                }
            map.labels[i] = map.labels[best_j];
        }
    return map;
}

int classify(const SomLattice& l, const NeuronLabelMap& map, std::span<const double> x) {
    NodeIndex b = best_matching_unit(l, x);
    return map.at(b.row, b.col);
}

}  // namespace doorsom
