#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "doorsom/rng.hpp"
#include "doorsom/som.hpp"

using namespace doorsom;

namespace {

SomLattice manual_lattice(int rows, int cols, std::vector<std::vector<double>> nodes) {
    SomLattice l(rows, cols, static_cast<int>(nodes[0].size()));
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            auto& src = nodes[static_cast<std::size_t>(r * cols + c)];
            std::copy(src.begin(), src.end(), l.node(r, c).begin());
        }
    return l;
}

}  // namespace

TEST_CASE("lattice init is seeded and bounded") {
    SomLattice a = init_lattice(4, 5, 3, 42);
    SomLattice b = init_lattice(4, 5, 3, 42);
    CHECK(a == b);
    CHECK(a.weights.size() == 60);
    for (double w : a.weights) {
        CHECK(w >= 0.0);
        CHECK(w < 1.0);
    }
    SomLattice c = init_lattice(4, 5, 3, 43);
    CHECK(c.weights != a.weights);

    CHECK(init_lattice(1, 1, 2, 7).weights.size() == 2);
    CHECK_THROWS_AS(init_lattice(0, 5, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(init_lattice(5, 5, 0, 1), std::invalid_argument);
}

TEST_CASE("bmu picks the closest node with row-major ties") {
    SomLattice single = manual_lattice(1, 1, {{0.3, 0.7}});
    CHECK(best_matching_unit(single, std::vector<double>{0.0, 0.0}) == NodeIndex{0, 0});

    SomLattice two = manual_lattice(1, 2, {{3, 4}, {1, 1}});
    CHECK(best_matching_unit(two, std::vector<double>{0, 0}) == NodeIndex{0, 1});

    SomLattice tie = manual_lattice(2, 2, {{5, 5}, {2, 2}, {2, 2}, {9, 9}});
    CHECK(best_matching_unit(tie, std::vector<double>{2, 2}) == NodeIndex{0, 1});

    CHECK_THROWS_AS(best_matching_unit(two, std::vector<double>{1, 2, 3}),
                    std::invalid_argument);
}

TEST_CASE("bmu agrees with a brute-force scan") {
    SplitMix64 rng(0xB1);
    for (int trial = 0; trial < 100; ++trial) {
        int rows = 1 + static_cast<int>(rng.below(6));
        int cols = 1 + static_cast<int>(rng.below(6));
        int dim = 1 + static_cast<int>(rng.below(8));
        SomLattice l = init_lattice(rows, cols, dim, rng.next());
        std::vector<double> x(static_cast<std::size_t>(dim));
        for (double& v : x) v = rng.uniform();

        NodeIndex got = best_matching_unit(l, x);
        double best = 1e300;
        NodeIndex want{0, 0};
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                double d2 = 0;
                auto w = l.node(r, c);
                for (int k = 0; k < dim; ++k) {
                    double e = x[static_cast<std::size_t>(k)] - w[static_cast<std::size_t>(k)];
                    d2 += e * e;
                }
                if (d2 < best) {
                    best = d2;
                    want = {r, c};
                }
            }
        CHECK(got == want);
    }
}

TEST_CASE("schedule endpoints and monotonicity") {
    TrainSchedule s;
    ScheduleValue v0 = schedule_at(s, 0);
    CHECK(v0.eta == 0.12);
    CHECK(v0.sigma == 4.0);

    int O = s.ordering_iters();
    CHECK(O == 1568);
    double p = static_cast<double>(O - 1) / O;
    CHECK(schedule_at(s, O - 1).sigma ==
          doctest::Approx(4.0 * std::exp(-p / 0.21)).epsilon(1e-12));
    CHECK(schedule_at(s, O - 1).sigma == doctest::Approx(0.0343).epsilon(0.01));

    ScheduleValue prev = v0;
    for (int n = 1; n < s.total_iters; ++n) {
        ScheduleValue v = schedule_at(s, n);
        CHECK(v.eta <= prev.eta);
        CHECK(v.sigma <= prev.sigma);
        if (n >= O) CHECK(v.eta == 0.001);
        prev = v;
    }

    CHECK_THROWS_AS(schedule_at(s, -1), std::invalid_argument);
    CHECK_THROWS_AS(schedule_at(s, s.total_iters), std::invalid_argument);
    TrainSchedule bad;
    bad.eta_conv = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("convergence spread never rises across the phase boundary") {
    TrainSchedule s;
    int O = s.ordering_iters();
    CHECK(s.conv_sigma() <= schedule_at(s, O - 1).sigma);
    CHECK(schedule_at(s, O).sigma == s.conv_sigma());
}

TEST_CASE("single-node update moves by the learning-rate fraction") {
    SomLattice l = manual_lattice(1, 1, {{0.5}});
    train_step(l, std::vector<double>{1.0}, 0.12, 1.0, 1.0);
    CHECK(std::abs(l.weights[0] - 0.56) < 1e-12);
}

TEST_CASE("a matching input with a collapsed neighborhood is a fixed point") {
    SomLattice l = manual_lattice(1, 2, {{0.2, 0.4}, {0.9, 0.9}});
    std::vector<double> before = l.weights;
    train_step(l, std::vector<double>{0.2, 0.4}, 0.12, 1e-9, 1.0);
    CHECK(l.weights == before);
}

TEST_CASE("a neighbor at grid distance sigma moves scaled by 1/e") {
    SomLattice l = manual_lattice(1, 2, {{0.3}, {0.8}});
    double eta = 0.12;
    train_step(l, std::vector<double>{0.3}, eta, 1.0, 1.0);
    double moved = l.weights[1] - 0.8;
    double expect = eta * std::exp(-1.0) * (0.3 - 0.8);
    CHECK(std::abs(moved - expect) < 1e-12);
}

TEST_CASE("weights stay in the unit cube when inputs do") {
    SplitMix64 rng(0xCAFE);
    SomLattice l = init_lattice(5, 5, 4, 1);
    TrainSchedule s;
    for (int n = 0; n < 500; ++n) {
        std::vector<double> x(4);
        for (double& v : x) v = rng.uniform();
        train_step(l, x, s, n % s.total_iters);
    }
    for (double w : l.weights) {
        CHECK(w >= 0.0);
        CHECK(w <= 1.0);
    }
}

TEST_CASE("repeated presentation converges geometrically") {
    SomLattice l = manual_lattice(2, 2, {{0.1, 0.1}, {0.9, 0.1}, {0.1, 0.9}, {0.9, 0.9}});
    std::vector<double> x{1.0, 1.0};
    double eta = 0.12;
    double e0 = std::hypot(0.9 - 1.0, 0.9 - 1.0);
    for (int n = 1; n <= 100; ++n) {
        train_step(l, x, eta, 1e-9, 1.0);
        auto w = l.node(1, 1);
        double e = std::hypot(w[0] - 1.0, w[1] - 1.0);
        CHECK(std::abs(e - e0 * std::pow(1.0 - eta, n)) < 1e-9);
    }
}

TEST_CASE("training is deterministic and shrinks quantization error") {
    SplitMix64 rng(0xDA7A);
    std::vector<std::vector<double>> data;
    for (int i = 0; i < 120; ++i) {
        double cx = (i % 3 == 0) ? 0.2 : (i % 3 == 1 ? 0.8 : 0.5);
        double cy = (i % 3 == 2) ? 0.8 : 0.2;
        data.push_back({cx + 0.03 * (rng.uniform() - 0.5), cy + 0.03 * (rng.uniform() - 0.5)});
    }
    TrainSchedule s;
    s.total_iters = 1960;
    s.eval_every = 98;

    SomLattice a = init_lattice(6, 6, 2, 9);
    SomLattice b = a;
    std::vector<CurvePoint> curve_a = train(a, data, s, 1234);
    std::vector<CurvePoint> curve_b = train(b, data, s, 1234);
    CHECK(a == b);
    REQUIRE(curve_a.size() == curve_b.size());
    for (std::size_t i = 0; i < curve_a.size(); ++i) CHECK(curve_a[i].qe == curve_b[i].qe);

    CHECK(curve_a.front().iter == 0);
    CHECK(curve_a.back().iter == s.total_iters);
    CHECK(curve_a.back().qe < 0.5 * curve_a.front().qe);

    int observed = 0;
    SomLattice c = init_lattice(6, 6, 2, 9);
    train(c, data, s, 1234, [&](int iter, const SomLattice& lat) {
        ++observed;
        CHECK(iter % s.eval_every == 0);
        CHECK(lat.rows == 6);
    });
    CHECK(observed == s.total_iters / s.eval_every);

    CHECK_THROWS_AS(train(a, std::vector<std::vector<double>>{}, s, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(train(a, std::vector<std::vector<double>>{{0.5}}, s, 1),
                    std::invalid_argument);
}

TEST_CASE("quantization error matches a brute-force oracle") {
    SomLattice l = manual_lattice(1, 2, {{0, 0}, {1, 1}});
    std::vector<std::vector<double>> exact{{0, 0}, {1, 1}};
    CHECK(quantization_error(l, exact) == 0.0);

    std::vector<std::vector<double>> one{{0.5, 0.5}};
    CHECK(quantization_error(l, one) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(quantization_error(l, std::vector<std::vector<double>>{}),
                    std::invalid_argument);
}

TEST_CASE("quantization error over random data") {
    SplitMix64 rng(0x7E57);
    SomLattice l = init_lattice(4, 4, 3, 2);
    std::vector<std::vector<double>> data;
    for (int i = 0; i < 50; ++i) {
        std::vector<double> x(3);
        for (double& v : x) v = rng.uniform();
        data.push_back(x);
    }
    double got = quantization_error(l, data);
    double want = 0.0;
    for (const auto& x : data) {
        double best = 1e300;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                auto w = l.node(r, c);
                double d2 = 0;
                for (int k = 0; k < 3; ++k) d2 += (x[k] - w[k]) * (x[k] - w[k]);
                best = std::min(best, d2);
            }
        want += std::sqrt(best);
    }
    want /= data.size();
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("label calibration by majority with door ties and inheritance") {
    SomLattice l = manual_lattice(1, 3, {{0.0}, {0.5}, {1.0}});

    std::vector<LabeledVector> maj{{{0.0}, 1}, {{0.01}, 1}, {{0.02}, 0},
                                   {{1.0}, 0}, {{0.99}, 0}, {{0.98}, 1}};
    NeuronLabelMap m = calibrate_labels(l, maj);
    CHECK(m.at(0, 0) == 1);  // 2 door vs 1 non-door
    CHECK(m.at(0, 2) == 0);

    std::vector<LabeledVector> tie{{{0.0}, 1}, {{0.01}, 0}, {{1.0}, 0}, {{0.99}, 1}};
    m = calibrate_labels(l, tie);
    CHECK(m.at(0, 0) == 1);
    CHECK(m.at(0, 2) == 1);

    // Node 1 never wins; it inherits from the nearer labeled node, and on a
    // grid-distance tie from the row-major first.
    std::vector<LabeledVector> inherit{{{0.0}, 0}, {{1.0}, 1}};
    m = calibrate_labels(l, inherit);
    CHECK(m.at(0, 1) == 0);

    std::vector<LabeledVector> single{{{0.0}, 1}, {{1.0}, 1}};
    CHECK_THROWS_AS(calibrate_labels(l, single), std::invalid_argument);
}

TEST_CASE("classification returns the bmu label") {
    SomLattice l = manual_lattice(1, 2, {{0.1, 0.1}, {0.9, 0.9}});
    NeuronLabelMap m{1, 2, {1, 0}};
    CHECK(classify(l, m, std::vector<double>{0.1, 0.1}) == 1);
    CHECK(classify(l, m, std::vector<double>{0.9, 0.9}) == 0);
    CHECK(classify(l, m, std::vector<double>{0.15, 0.12}) == 1);

    // Scaling everything by the same positive factor keeps the decision.
    SomLattice ls = l;
    for (double& w : ls.weights) w *= 3.0;
    CHECK(classify(ls, m, std::vector<double>{0.3, 0.3}) == 1);
}
