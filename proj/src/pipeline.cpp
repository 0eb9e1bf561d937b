#include "doorsom/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "doorsom/pnm.hpp"
#include "doorsom/rng.hpp"

namespace doorsom {

namespace {

constexpr char kMagic[8] = {'S', 'O', 'M', 'D', 'O', 'O', 'R', '1'};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

struct Reader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    void need(std::size_t n, const char* field) {
        if (bytes.size() - pos < n)
            throw std::runtime_error("model load error: truncated " + std::string(field) +
                                     ": expected " + std::to_string(n) + " bytes at offset " +
                                     std::to_string(pos) + ", got " +
                                     std::to_string(bytes.size() - pos));
    }
    std::uint32_t get_u32(const char* field) {
        need(4, field);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    double get_f64(const char* field) {
        need(8, field);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos + i]) << (8 * i);
        pos += 8;
        return std::bit_cast<double>(v);
    }
};

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Every tunable is serialized so a model round-trips bit-exactly and carries
// the exact configuration it was trained with.
std::string config_text(const PipelineConfig& c) {
    std::ostringstream os;
    auto d = [&](const char* k, double v) { os << k << '=' << fmt_double(v) << '\n'; };
    auto i = [&](const char* k, int v) { os << k << '=' << v << '\n'; };
    d("canny.sigma", c.canny.sigma);
    d("canny.low_frac", c.canny.low_frac);
    d("canny.high_frac", c.canny.high_frac);
    d("linefit.dev_tol", c.linefit.dev_tol);
    d("linefit.angle_tol", c.linefit.angle_tol);
    d("linefit.gap_tol", c.linefit.gap_tol);
    d("linefit.lat_tol", c.linefit.lat_tol);
    d("linefit.min_frag", c.linefit.min_frag);
    d("linefit.min_len", c.linefit.min_len);
    d("feat.vert_tol_deg", c.feat.vert_tol_deg);
    d("feat.min_len_frac", c.feat.min_len_frac);
    d("feat.horizon_frac", c.feat.horizon_frac);
    d("feat.w_min_frac", c.feat.w_min_frac);
    d("feat.w_max_frac", c.feat.w_max_frac);
    d("feat.horiz_tol_deg", c.feat.horiz_tol_deg);
    d("feat.floor_region_frac", c.feat.floor_region_frac);
    d("feat.floor_min_span_frac", c.feat.floor_min_span_frac);
    d("feat.floor_band_tol", c.feat.floor_band_tol);
    d("feat.conc_band", c.feat.conc_band);
    d("feat.conc_max", c.feat.conc_max);
    i("feat.sample_cols", c.feat.sample_cols);
    i("feat.window_rows", c.feat.window_rows);
    i("feat.bins", c.feat.bins);
    d("schedule.eta0_order", c.schedule.eta0_order);
    d("schedule.eta_conv", c.schedule.eta_conv);
    d("schedule.sigma0", c.schedule.sigma0);
    d("schedule.tau_sigma", c.schedule.tau_sigma);
    d("schedule.tau_eta", c.schedule.tau_eta);
    d("schedule.h0", c.schedule.h0);
    d("schedule.sigma_min", c.schedule.sigma_min);
    i("schedule.total_iters", c.schedule.total_iters);
    d("schedule.order_frac", c.schedule.order_frac);
    i("schedule.eval_every", c.schedule.eval_every);
    i("som.rows", c.som_rows);
    i("som.cols", c.som_cols);
    d("iou_threshold", c.iou_threshold);
    return os.str();
}

void apply_config_line(PipelineConfig& c, const std::string& key, const std::string& val) {
    auto d = [&] { return std::stod(val); };
    auto i = [&] { return std::stoi(val); };
    if (key == "canny.sigma") c.canny.sigma = d();
    else if (key == "canny.low_frac") c.canny.low_frac = d();
    else if (key == "canny.high_frac") c.canny.high_frac = d();
    else if (key == "linefit.dev_tol") c.linefit.dev_tol = d();
    else if (key == "linefit.angle_tol") c.linefit.angle_tol = d();
    else if (key == "linefit.gap_tol") c.linefit.gap_tol = d();
    else if (key == "linefit.lat_tol") c.linefit.lat_tol = d();
    else if (key == "linefit.min_frag") c.linefit.min_frag = d();
    else if (key == "linefit.min_len") c.linefit.min_len = d();
    else if (key == "feat.vert_tol_deg") c.feat.vert_tol_deg = d();
    else if (key == "feat.min_len_frac") c.feat.min_len_frac = d();
    else if (key == "feat.horizon_frac") c.feat.horizon_frac = d();
    else if (key == "feat.w_min_frac") c.feat.w_min_frac = d();
    else if (key == "feat.w_max_frac") c.feat.w_max_frac = d();
    else if (key == "feat.horiz_tol_deg") c.feat.horiz_tol_deg = d();
    else if (key == "feat.floor_region_frac") c.feat.floor_region_frac = d();
    else if (key == "feat.floor_min_span_frac") c.feat.floor_min_span_frac = d();
    else if (key == "feat.floor_band_tol") c.feat.floor_band_tol = d();
    else if (key == "feat.conc_band") c.feat.conc_band = d();
    else if (key == "feat.conc_max") c.feat.conc_max = d();
    else if (key == "feat.sample_cols") c.feat.sample_cols = i();
    else if (key == "feat.window_rows") c.feat.window_rows = i();
    else if (key == "feat.bins") c.feat.bins = i();
    else if (key == "schedule.eta0_order") c.schedule.eta0_order = d();
    else if (key == "schedule.eta_conv") c.schedule.eta_conv = d();
    else if (key == "schedule.sigma0") c.schedule.sigma0 = d();
    else if (key == "schedule.tau_sigma") c.schedule.tau_sigma = d();
    else if (key == "schedule.tau_eta") c.schedule.tau_eta = d();
    else if (key == "schedule.h0") c.schedule.h0 = d();
    else if (key == "schedule.sigma_min") c.schedule.sigma_min = d();
    else if (key == "schedule.total_iters") c.schedule.total_iters = i();
    else if (key == "schedule.order_frac") c.schedule.order_frac = d();
    else if (key == "schedule.eval_every") c.schedule.eval_every = i();
    else if (key == "som.rows") c.som_rows = i();
    else if (key == "som.cols") c.som_cols = i();
    else if (key == "iou_threshold") c.iou_threshold = d();
    else throw std::runtime_error("model load error: unknown config key: " + key);
}

PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig c;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("model load error: malformed config line: " + line);
        try {
            apply_config_line(c, line.substr(0, eq), line.substr(eq + 1));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("model load error: bad config value in line: " + line);
        }
    }
    return c;
}

}  // namespace

BoxD truth_box(const GroundTruth& t) {
    return {static_cast<double>(t.door.x0), static_cast<double>(t.door.y0),
            static_cast<double>(t.door.x1), static_cast<double>(t.door.y1)};
}

Corpus load_corpus(const std::string& dir) {
    namespace fs = std::filesystem;
    std::ifstream tf(fs::path(dir) / "truth.txt");
    if (!tf) throw std::runtime_error("cannot open " + dir + "/truth.txt");
    Corpus corpus;
    std::string line;
    while (std::getline(tf, line)) {
        if (line.empty()) continue;
        GroundTruth t = GroundTruth::from_line(line);
        fs::path img = fs::path(dir) / lighting_name(t.category) /
                       (std::to_string(t.index) + ".pgm");
        corpus.images.push_back({to_gray(load_pnm_file(img.string())), t});
    }
    if (corpus.images.empty()) throw std::runtime_error("empty corpus: " + dir);
    return corpus;
}

DoorModel train_model(const Corpus& corpus, const PipelineConfig& cfg, std::uint64_t seed,
                      TrainingDiagnostics* diag) {
    cfg.schedule.validate();
    if (corpus.images.empty()) throw std::invalid_argument("train_model: empty corpus");

    std::vector<std::vector<double>> raw;
    std::vector<int> labels;
    int n_door = 0, n_non = 0;
    for (const LabeledImage& li : corpus.images) {
        EdgeMap edges = canny(li.image, cfg.canny);
        std::vector<LineSegment> lines = detect_lines(edges, cfg.linefit);
        BoxD tb = truth_box(li.truth);
        for (const DoorCandidate& c : find_post_candidates(lines, li.image, cfg.feat)) {
            raw.push_back(build_feature_vector(c, li.image, cfg.feat, nullptr));
            int lab = iou(c.region(), tb) >= cfg.iou_threshold ? 1 : 0;
            labels.push_back(lab);
            ++(lab ? n_door : n_non);
        }
    }

    if (diag) {
        diag->images = static_cast<int>(corpus.images.size());
        diag->candidates = static_cast<int>(raw.size());
        diag->door_candidates = n_door;
        diag->nondoor_candidates = n_non;
    }
    std::string counts = std::to_string(raw.size()) + " candidates from " +
                         std::to_string(corpus.images.size()) + " images, " +
                         std::to_string(n_door) + " door / " + std::to_string(n_non) +
                         " non-door";
    if (n_door == 0) throw std::runtime_error("train_model: no positive candidates (" + counts + ")");
    if (n_non == 0) throw std::runtime_error("train_model: no negative candidates (" + counts + ")");

    NormalizationStats norm = NormalizationStats::fit(raw);
    std::vector<std::vector<double>> data;
    data.reserve(raw.size());
    for (const auto& v : raw) data.push_back(norm.apply(v));
    std::vector<LabeledVector> labeled;
    labeled.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        labeled.push_back({data[i], labels[static_cast<std::size_t>(i)]});

    // An unlucky random init occasionally folds the map and the fold survives
    // the convergence phase. Training is cheap next to feature extraction, so
    // run a few restarts and keep the lattice that classifies its own
    // training set best.
    constexpr int kRestarts = 5;
    SplitMix64 seeder(seed);
    SomLattice best;
    std::vector<CurvePoint> best_curve, best_mis;
    double best_err = std::numeric_limits<double>::infinity();
    for (int rs = 0; rs < kRestarts; ++rs) {
        std::uint64_t init_seed = seeder.next();
        std::uint64_t train_seed = seeder.next();
        SomLattice lattice = init_lattice(cfg.som_rows, cfg.som_cols, cfg.feat.dim(), init_seed);

        std::vector<CurvePoint> mis;
        TrainObserver observer;
        if (diag)
            observer = [&](int iter, const SomLattice& l) {
                NeuronLabelMap m = calibrate_labels(l, labeled);
                int wrong = 0;
                for (std::size_t i = 0; i < data.size(); ++i)
                    if (classify(l, m, data[i]) != labels[i]) ++wrong;
                mis.push_back({iter, static_cast<double>(wrong) / static_cast<double>(data.size())});
            };

        std::vector<CurvePoint> curve = train(lattice, data, cfg.schedule, train_seed, observer);

        NeuronLabelMap m = calibrate_labels(lattice, labeled);
        int wrong = 0;
        for (std::size_t i = 0; i < data.size(); ++i)
            if (classify(lattice, m, data[i]) != labels[i]) ++wrong;
        double err = static_cast<double>(wrong) / static_cast<double>(data.size());
        if (err < best_err) {
            best_err = err;
            best = std::move(lattice);
            best_curve = std::move(curve);
            best_mis = std::move(mis);
        }
    }
    if (diag) {
        diag->error_curve = std::move(best_curve);
        diag->misclass_curve = std::move(best_mis);
    }

    NeuronLabelMap map = calibrate_labels(best, labeled);
    return DoorModel{1, std::move(best), std::move(map), std::move(norm), cfg};
}

DetectionResult detect_doors(const GrayImage& img, const DoorModel& model) {
    DetectionResult res;
    res.width = img.width;
    res.height = img.height;
    EdgeMap edges = canny(img, model.cfg.canny);
    std::vector<LineSegment> lines = detect_lines(edges, model.cfg.linefit);
    for (DoorCandidate& c : find_post_candidates(lines, img, model.cfg.feat)) {
        std::vector<double> v = build_feature_vector(c, img, model.cfg.feat, &model.norm);
        int cls = classify(model.lattice, model.labels, v);
        BoxD r = c.region();
        r.x0 = std::clamp(r.x0, 0.0, static_cast<double>(img.width - 1));
        r.x1 = std::clamp(r.x1, 0.0, static_cast<double>(img.width - 1));
        r.y0 = std::clamp(r.y0, 0.0, static_cast<double>(img.height - 1));
        r.y1 = std::clamp(r.y1, 0.0, static_cast<double>(img.height - 1));
        res.detections.push_back({cls, std::move(c), r});
    }
    return res;
}

namespace {

void raster_line(EdgeMap& map, const LineSegment& s) {
    int x0 = static_cast<int>(std::lround(s.p0.x)), y0 = static_cast<int>(std::lround(s.p0.y));
    int x1 = static_cast<int>(std::lround(s.p1.x)), y1 = static_cast<int>(std::lround(s.p1.y));
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        if (x0 >= 0 && x0 < map.width && y0 >= 0 && y0 < map.height) map.set(x0, y0, true);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

EdgeMap DetectionResult::line_raster() const {
    EdgeMap map(width, height);
    for (const Detection& d : detections) {
        if (d.cls != 1) continue;
        raster_line(map, d.candidate.left_post);
        raster_line(map, d.candidate.right_post);
    }
    return map;
}

bool online_update(DoorModel& model, const GrayImage& img, const BoxD& truth) {
    EdgeMap edges = canny(img, model.cfg.canny);
    std::vector<LineSegment> lines = detect_lines(edges, model.cfg.linefit);
    std::vector<DoorCandidate> cands = find_post_candidates(lines, img, model.cfg.feat);
    if (cands.empty()) return false;

    const DoorCandidate* best = &cands[0];
    double best_iou = -1.0;
    for (const DoorCandidate& c : cands) {
        double v = iou(c.region(), truth);
        if (v > best_iou) {
            best_iou = v;
            best = &c;
        }
    }
    std::vector<double> v = build_feature_vector(*best, img, model.cfg.feat, &model.norm);
    train_step(model.lattice, v, model.cfg.schedule.eta_conv, model.cfg.schedule.conv_sigma(),
               model.cfg.schedule.h0);
    return true;
}

std::vector<std::uint8_t> save_model(const DoorModel& model) {
    const SomLattice& l = model.lattice;
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 8);
    put_u32(out, model.format_version);
    put_u32(out, static_cast<std::uint32_t>(l.rows));
    put_u32(out, static_cast<std::uint32_t>(l.cols));
    put_u32(out, static_cast<std::uint32_t>(l.dim));
    for (double w : l.weights) put_f64(out, w);
    out.insert(out.end(), model.labels.labels.begin(), model.labels.labels.end());
    put_u32(out, static_cast<std::uint32_t>(model.norm.dim()));
    for (std::size_t i = 0; i < model.norm.dim(); ++i) {
        put_f64(out, model.norm.min_v[i]);
        put_f64(out, model.norm.max_v[i]);
    }
    std::string text = config_text(model.cfg);
    put_u32(out, static_cast<std::uint32_t>(text.size()));
    out.insert(out.end(), text.begin(), text.end());
    return out;
}

DoorModel load_model(std::span<const std::uint8_t> bytes) {
    Reader r{bytes};
    r.need(8, "magic");
    if (std::memcmp(bytes.data(), kMagic, 8) != 0)
        throw std::runtime_error("model load error: bad magic");
    r.pos = 8;

    DoorModel model;
    model.format_version = r.get_u32("format_version");
    if (model.format_version != 1)
        throw std::runtime_error("model load error: unsupported format_version " +
                                 std::to_string(model.format_version));
    std::uint32_t rows = r.get_u32("rows");
    std::uint32_t cols = r.get_u32("cols");
    std::uint32_t dim = r.get_u32("dim");
    if (rows < 1 || cols < 1 || dim < 1 || rows > 4096 || cols > 4096 || dim > 65536)
        throw std::runtime_error("model load error: implausible lattice dimensions");

    model.lattice = SomLattice(static_cast<int>(rows), static_cast<int>(cols),
                               static_cast<int>(dim));
    for (double& w : model.lattice.weights) w = r.get_f64("weights");

    std::size_t n_nodes = static_cast<std::size_t>(rows) * cols;
    r.need(n_nodes, "labels");
    model.labels.rows = static_cast<int>(rows);
    model.labels.cols = static_cast<int>(cols);
    model.labels.labels.assign(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos),
                               bytes.begin() + static_cast<std::ptrdiff_t>(r.pos + n_nodes));
    r.pos += n_nodes;
    for (std::uint8_t b : model.labels.labels)
        if (b > 1) throw std::runtime_error("model load error: invalid label byte");

    std::uint32_t norm_dim = r.get_u32("norm_dim");
    if (norm_dim != dim)
        throw std::runtime_error("model load error: norm_dim " + std::to_string(norm_dim) +
                                 " does not match lattice dim " + std::to_string(dim));
    model.norm.min_v.resize(norm_dim);
    model.norm.max_v.resize(norm_dim);
    for (std::uint32_t i = 0; i < norm_dim; ++i) {
        model.norm.min_v[i] = r.get_f64("norm stats");
        model.norm.max_v[i] = r.get_f64("norm stats");
    }

    std::uint32_t text_len = r.get_u32("config text length");
    r.need(text_len, "config text");
    std::string text(bytes.begin() + static_cast<std::ptrdiff_t>(r.pos),
                     bytes.begin() + static_cast<std::ptrdiff_t>(r.pos + text_len));
    r.pos += text_len;
    model.cfg = parse_config_text(text);

    if (r.pos != bytes.size())
        throw std::runtime_error("model load error: trailing bytes after config text");
    if (model.cfg.feat.dim() != static_cast<int>(dim))
        throw std::runtime_error("model load error: feature config dimension " +
                                 std::to_string(model.cfg.feat.dim()) +
                                 " does not match lattice dim " + std::to_string(dim));
    if (model.cfg.som_rows != static_cast<int>(rows) || model.cfg.som_cols != static_cast<int>(cols))
        throw std::runtime_error("model load error: som grid config does not match lattice");
    return model;
}

void save_model_file(const std::string& path, const DoorModel& model) {
    std::vector<std::uint8_t> bytes = save_model(model);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

DoorModel load_model_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return load_model(bytes);
}

EvalReport evaluate_corpus(const DoorModel& model, const Corpus& corpus) {
    EvalReport rep;
    for (Lighting cat : {Lighting::day, Lighting::night, Lighting::shadow})
        rep.categories.push_back({cat, 0, 0, 0, 0});

    for (const LabeledImage& li : corpus.images) {
        DetectionResult res = detect_doors(li.image, model);
        BoxD tb = truth_box(li.truth);
        bool detected = false;
        int n_door_class = 0;
        for (const Detection& d : res.detections) {
            if (d.cls != 1) continue;
            ++n_door_class;
            if (iou(d.region, tb) >= model.cfg.iou_threshold) detected = true;
        }
        rep.images.push_back({li.truth.category, li.truth.index, detected, n_door_class});
        for (EvalCategory& c : rep.categories)
            if (c.category == li.truth.category) {
                ++c.images;
                ++c.doors;
                if (detected) {
                    ++c.detected;
                    ++c.doors_detected;
                }
            }
    }
    return rep;
}

std::string EvalReport::to_table() const {
    auto pct = [](int num, int den) -> std::string {
        if (den == 0) return "-";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", 100.0 * num / den);
        return buf;
    };
    std::ostringstream os;
    os << std::left << std::setw(22) << "Attribute";
    for (const EvalCategory& c : categories) {
        std::string head = lighting_name(c.category);
        head[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(head[0])));
        os << std::setw(11) << head;
    }
    os << '\n';
    auto row = [&](const char* name, auto get) {
        os << std::left << std::setw(22) << name;
        for (const EvalCategory& c : categories) os << std::setw(11) << get(c);
        os << '\n';
    };
    row("Images", [](const EvalCategory& c) { return std::to_string(c.images); });
    row("Detected", [](const EvalCategory& c) { return std::to_string(c.detected); });
    row("Detection Rate (%)", [&](const EvalCategory& c) { return pct(c.detected, c.images); });
    row("Doors", [](const EvalCategory& c) { return std::to_string(c.doors); });
    row("Doors Detected", [](const EvalCategory& c) { return std::to_string(c.doors_detected); });
    row("Door Recall (%)", [&](const EvalCategory& c) { return pct(c.doors_detected, c.doors); });
    return os.str();
}

namespace {

double median_of(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace

BenchReport bench(const DoorModel& model, const GrayImage& img, int classify_reps,
                  int step_reps) {
    using clock = std::chrono::steady_clock;
    BenchReport rep;
    rep.classify_reps = std::max(1, classify_reps);
    rep.train_step_reps = std::max(1, step_reps);

    std::vector<std::vector<double>> data;
    {
        EdgeMap edges = canny(img, model.cfg.canny);
        std::vector<LineSegment> lines = detect_lines(edges, model.cfg.linefit);
        for (const DoorCandidate& c : find_post_candidates(lines, img, model.cfg.feat))
            data.push_back(build_feature_vector(c, img, model.cfg.feat, &model.norm));
    }
    if (data.empty()) {
        SplitMix64 rng(0xB0DE);
        for (int i = 0; i < 256; ++i) {
            std::vector<double> v(static_cast<std::size_t>(model.lattice.dim));
            for (double& x : v) x = rng.uniform();
            data.push_back(std::move(v));
        }
    }
    const std::vector<double>& probe = data[0];

    std::vector<double> times;
    times.reserve(static_cast<std::size_t>(rep.classify_reps));
    volatile int sink = 0;
    for (int i = 0; i < rep.classify_reps; ++i) {
        auto t0 = clock::now();
        sink = sink + classify(model.lattice, model.labels, probe);
        auto t1 = clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    rep.classify_s = median_of(std::move(times));

    SomLattice work = model.lattice;
    double eta = model.cfg.schedule.eta_conv;
    double sigma = model.cfg.schedule.conv_sigma();
    times.clear();
    times.reserve(static_cast<std::size_t>(rep.train_step_reps));
    for (int i = 0; i < rep.train_step_reps; ++i) {
        auto t0 = clock::now();
        train_step(work, probe, eta, sigma, model.cfg.schedule.h0);
        auto t1 = clock::now();
        times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    rep.train_step_s = median_of(std::move(times));

    SomLattice fresh = init_lattice(model.lattice.rows, model.lattice.cols, model.lattice.dim,
                                    0x5EEDULL);
    auto t0 = clock::now();
    train(fresh, data, model.cfg.schedule, 0x5EEDULL);
    auto t1 = clock::now();
    rep.full_train_s = std::chrono::duration<double>(t1 - t0).count();
    return rep;
}

std::string BenchReport::to_table() const {
    auto fmt = [](double s) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.9f", s);
        return std::string(buf);
    };
    std::ostringstream os;
    os << std::left << std::setw(30) << "Attribute" << "Time (sec)\n";
    os << std::left << std::setw(30) << "Initial Update Time" << fmt(full_train_s) << '\n';
    os << std::left << std::setw(30) << "Learning Update Time" << fmt(train_step_s) << '\n';
    os << std::left << std::setw(30) << "Pattern Classification Time" << fmt(classify_s) << '\n';
    return os.str();
}

RgbImage render_overlay(const GrayImage& img, const DetectionResult& result) {
    RgbImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            std::uint8_t v = img.at(x, y);
            out.set(x, y, v, v, v);
        }
    for (const Detection& d : result.detections) {
        std::uint8_t r = d.cls ? 0 : 200, g = d.cls ? 220 : 0, b = 0;
        int x0 = std::clamp(static_cast<int>(std::lround(d.region.x0)), 0, img.width - 1);
        int x1 = std::clamp(static_cast<int>(std::lround(d.region.x1)), 0, img.width - 1);
        int y0 = std::clamp(static_cast<int>(std::lround(d.region.y0)), 0, img.height - 1);
        int y1 = std::clamp(static_cast<int>(std::lround(d.region.y1)), 0, img.height - 1);
        for (int x = x0; x <= x1; ++x) {
            out.set(x, y0, r, g, b);
            out.set(x, y1, r, g, b);
        }
        for (int y = y0; y <= y1; ++y) {
            out.set(x0, y, r, g, b);
            out.set(x1, y, r, g, b);
        }
    }
    return out;
}

}  // namespace doorsom
