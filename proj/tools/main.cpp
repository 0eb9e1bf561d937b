#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "doorsom/pipeline.hpp"
#include "doorsom/pnm.hpp"
#include "doorsom/synth.hpp"

namespace {

using namespace doorsom;

std::string fmt_seg(const LineSegment& s) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(%g,%g,%g,%g)", s.p0.x, s.p0.y, s.p1.x, s.p1.y);
    return buf;
}

void dump_lines(const std::string& path, const std::vector<LineSegment>& lines) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    for (const LineSegment& s : lines) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%g %g %g %g\n", s.p0.x, s.p0.y, s.p1.x, s.p1.y);
        f << buf;
    }
}

void dump_candidates(const std::string& path, const GrayImage& img,
                     const std::vector<DoorCandidate>& cands, const FeatureParams& feat) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    for (const DoorCandidate& c : cands) {
        CandidateFeatures cf = compute_features(c, img, feat);
        char buf[128];
        std::snprintf(buf, sizeof buf, " dist %g conc %g contrast %g\n", cf.post_dist,
                      cf.conc.value_or(0.0), cf.gap.valid ? cf.gap.contrast : 0.0);
        f << "left" << fmt_seg(c.left_post) << " right" << fmt_seg(c.right_post) << buf;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"door detection: Canny edges, line fitting, and a Kohonen SOM classifier"};
    app.require_subcommand(1);

    std::string synth_dir;
    int synth_n = 100;
    std::uint64_t synth_seed = 1;
    int synth_w = 320, synth_h = 240;
    CLI::App* synth = app.add_subcommand("synth", "Generate a labeled synthetic corpus");
    synth->add_option("--out", synth_dir, "Output directory")->required();
    synth->add_option("--n", synth_n, "Images per category")->capture_default_str();
    synth->add_option("--seed", synth_seed, "Master seed")->capture_default_str();
    synth->add_option("--width", synth_w, "Image width")->capture_default_str();
    synth->add_option("--height", synth_h, "Image height")->capture_default_str();

    PipelineConfig cfg;
    std::string train_corpus, train_out;
    std::uint64_t train_seed = 1;
    bool train_curve = false;
    CLI::App* train = app.add_subcommand("train", "Train a door model on a labeled corpus");
    train->add_option("--corpus", train_corpus, "Corpus directory (with truth.txt)")->required();
    train->add_option("--out", train_out, "Model file to write")->required();
    train->add_option("--seed", train_seed, "Training seed")->capture_default_str();
    train->add_flag("--curve", train_curve, "Print the error curve after training");
    train->add_option("--sigma", cfg.canny.sigma, "Canny Gaussian sigma")->capture_default_str();
    train->add_option("--canny-lo", cfg.canny.low_frac, "Low threshold, fraction of max magnitude")
        ->capture_default_str();
    train->add_option("--canny-hi", cfg.canny.high_frac, "High threshold, fraction of max magnitude")
        ->capture_default_str();
    train->add_option("--dev-tol", cfg.linefit.dev_tol, "Split deviation tolerance, px")
        ->capture_default_str();
    train->add_option("--angle-tol", cfg.linefit.angle_tol, "Merge angle tolerance, rad")
        ->capture_default_str();
    train->add_option("--gap-tol", cfg.linefit.gap_tol, "Merge endpoint gap tolerance, px")
        ->capture_default_str();
    train->add_option("--min-frag", cfg.linefit.min_frag, "Pre-merge fragment length floor, px")
        ->capture_default_str();
    train->add_option("--lat-tol", cfg.linefit.lat_tol, "Merge lateral tolerance, px")
        ->capture_default_str();
    train->add_option("--min-len", cfg.linefit.min_len, "Minimum segment length, px")
        ->capture_default_str();
    train->add_option("--vert-tol", cfg.feat.vert_tol_deg, "Post angle tolerance, deg")
        ->capture_default_str();
    train->add_option("--post-len-frac", cfg.feat.min_len_frac, "Post length floor, frac of height")
        ->capture_default_str();
    train->add_option("--horizon-frac", cfg.feat.horizon_frac, "Horizon row, frac of height")
        ->capture_default_str();
    train->add_option("--w-min", cfg.feat.w_min_frac, "Min post separation, frac of width")
        ->capture_default_str();
    train->add_option("--w-max", cfg.feat.w_max_frac, "Max post separation, frac of width")
        ->capture_default_str();
    train->add_option("--horiz-tol", cfg.feat.horiz_tol_deg, "Horizontal angle tolerance, deg")
        ->capture_default_str();
    train->add_option("--conc-band", cfg.feat.conc_band, "Bottom-edge search band, px")
        ->capture_default_str();
    train->add_option("--sample-cols", cfg.feat.sample_cols, "Profile sample columns")
        ->capture_default_str();
    train->add_option("--window-rows", cfg.feat.window_rows, "Profile half-window rows")
        ->capture_default_str();
    train->add_option("--bins", cfg.feat.bins, "Profile bins")->capture_default_str();
    train->add_option("--eta0", cfg.schedule.eta0_order, "Ordering learning rate")
        ->capture_default_str();
    train->add_option("--eta-conv", cfg.schedule.eta_conv, "Convergence learning rate")
        ->capture_default_str();
    train->add_option("--sigma0", cfg.schedule.sigma0, "Initial neighborhood spread")
        ->capture_default_str();
    train->add_option("--tau-sigma", cfg.schedule.tau_sigma, "Spread time constant")
        ->capture_default_str();
    train->add_option("--tau-eta", cfg.schedule.tau_eta, "Learning-rate time constant")
        ->capture_default_str();
    train->add_option("--h0", cfg.schedule.h0, "Neighborhood amplitude")->capture_default_str();
    train->add_option("--sigma-min", cfg.schedule.sigma_min, "Convergence spread ceiling")
        ->capture_default_str();
    train->add_option("--iters", cfg.schedule.total_iters, "Total training iterations")
        ->capture_default_str();
    train->add_option("--order-frac", cfg.schedule.order_frac, "Ordering-phase fraction")
        ->capture_default_str();
    train->add_option("--eval-every", cfg.schedule.eval_every, "Error-curve sampling stride")
        ->capture_default_str();
    train->add_option("--som-rows", cfg.som_rows, "Lattice rows")->capture_default_str();
    train->add_option("--som-cols", cfg.som_cols, "Lattice cols")->capture_default_str();
    train->add_option("--iou", cfg.iou_threshold, "Door/non-door IoU threshold")
        ->capture_default_str();

    std::string det_model, det_image, det_overlay, det_raster, det_lines, det_cands;
    CLI::App* detect = app.add_subcommand("detect", "Detect doors in one image");
    detect->add_option("--model", det_model, "Model file")->required();
    detect->add_option("--image", det_image, "Input PGM/PPM image")->required();
    detect->add_option("--overlay", det_overlay, "Write detection overlay PPM here");
    detect->add_option("--raster", det_raster, "Write binary line raster PGM here");
    detect->add_option("--dump-lines", det_lines, "Write fitted segments as 'x0 y0 x1 y1' rows");
    detect->add_option("--dump-candidates", det_cands, "Write candidate feature dump here");

    std::string eval_model, eval_corpus;
    CLI::App* eval = app.add_subcommand("eval", "Evaluate a model over a labeled corpus");
    eval->add_option("--model", eval_model, "Model file")->required();
    eval->add_option("--corpus", eval_corpus, "Corpus directory (with truth.txt)")->required();

    std::string bench_model, bench_image;
    int bench_reps = 1000, bench_step_reps = 100;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Time classification, update, and training");
    bench_cmd->add_option("--model", bench_model, "Model file")->required();
    bench_cmd->add_option("--image", bench_image, "Input image")->required();
    bench_cmd->add_option("--reps", bench_reps, "Classification repetitions")
        ->capture_default_str();
    bench_cmd->add_option("--step-reps", bench_step_reps, "Update repetitions")
        ->capture_default_str();

    std::string upd_model, upd_image, upd_out;
    std::vector<double> upd_truth;
    CLI::App* update = app.add_subcommand("update", "Online-learn from one labeled frame");
    update->add_option("--model", upd_model, "Model file")->required();
    update->add_option("--image", upd_image, "Input image")->required();
    update->add_option("--truth", upd_truth, "Door box: x_left y_top x_right y_bottom")
        ->expected(4)
        ->required();
    update->add_option("--out", upd_out, "Updated model file to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (synth->parsed()) {
            std::vector<CorpusEntry> entries =
                generate_corpus(synth_dir, synth_n, synth_seed, synth_w, synth_h);
            std::cout << "wrote " << entries.size() << " images to " << synth_dir << '\n';
        } else if (train->parsed()) {
            Corpus corpus = load_corpus(train_corpus);
            TrainingDiagnostics diag;
            DoorModel model = train_model(corpus, cfg, train_seed, &diag);
            save_model_file(train_out, model);
            std::cout << "trained on " << diag.images << " images, " << diag.candidates
                      << " candidates (" << diag.door_candidates << " door, "
                      << diag.nondoor_candidates << " non-door)\n";
            std::cout << "model written to " << train_out << '\n';
            if (train_curve) {
                std::cout << "iter qe misclass\n";
                for (std::size_t i = 0; i < diag.error_curve.size(); ++i) {
                    char buf[80];
                    double mc = i > 0 && i - 1 < diag.misclass_curve.size()
                                    ? diag.misclass_curve[i - 1].qe
                                    : 0.0;
                    std::snprintf(buf, sizeof buf, "%d %.6f %.6f\n", diag.error_curve[i].iter,
                                  diag.error_curve[i].qe, mc);
                    std::cout << buf;
                }
            }
        } else if (detect->parsed()) {
            DoorModel model = load_model_file(det_model);
            GrayImage img = to_gray(load_pnm_file(det_image));
            DetectionResult res = detect_doors(img, model);
            for (const Detection& d : res.detections) {
                char buf[96];
                std::snprintf(buf, sizeof buf, "%d %ld %ld %ld %ld\n", d.cls,
                              std::lround(d.region.x0), std::lround(d.region.y0),
                              std::lround(d.region.x1), std::lround(d.region.y1));
                std::cout << buf;
            }
            if (!det_overlay.empty()) save_pnm_file(det_overlay, render_overlay(img, res));
            if (!det_raster.empty()) {
                EdgeMap raster = res.line_raster();
                GrayImage out(raster.width, raster.height);
                for (std::size_t i = 0; i < raster.edge.size(); ++i)
                    out.data[i] = raster.edge[i] ? 255 : 0;
                save_pnm_file(det_raster, out);
            }
            if (!det_lines.empty() || !det_cands.empty()) {
                EdgeMap edges = canny(img, model.cfg.canny);
                std::vector<LineSegment> lines = detect_lines(edges, model.cfg.linefit);
                if (!det_lines.empty()) dump_lines(det_lines, lines);
                if (!det_cands.empty())
                    dump_candidates(det_cands, img,
                                    find_post_candidates(lines, img, model.cfg.feat),
                                    model.cfg.feat);
            }
        } else if (eval->parsed()) {
            DoorModel model = load_model_file(eval_model);
            Corpus corpus = load_corpus(eval_corpus);
            std::cout << evaluate_corpus(model, corpus).to_table();
        } else if (bench_cmd->parsed()) {
            DoorModel model = load_model_file(bench_model);
            GrayImage img = to_gray(load_pnm_file(bench_image));
            std::cout << bench(model, img, bench_reps, bench_step_reps).to_table();
        } else if (update->parsed()) {
            DoorModel model = load_model_file(upd_model);
            GrayImage img = to_gray(load_pnm_file(upd_image));
            BoxD truth{upd_truth[0], upd_truth[1], upd_truth[2], upd_truth[3]};
            bool applied = online_update(model, img, truth);
            save_model_file(upd_out, model);
            std::cout << (applied ? "updated from best-overlap candidate\n"
                                  : "no candidates in frame; model unchanged\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
