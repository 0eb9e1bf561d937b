#include "doorsom/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doorsom/pnm.hpp"

namespace doorsom {

const char* lighting_name(Lighting l) {
    switch (l) {
        case Lighting::day: return "day";
        case Lighting::night: return "night";
        case Lighting::shadow: return "shadow";
    }
    throw std::invalid_argument("lighting_name: bad enum value");
}

Lighting lighting_from_name(const std::string& name) {
    if (name == "day") return Lighting::day;
    if (name == "night") return Lighting::night;
    if (name == "shadow") return Lighting::shadow;
    throw std::invalid_argument("unknown lighting category: " + name);
}

void SceneSpec::validate() const {
    if (width < 32 || height < 32) throw std::invalid_argument("SceneSpec: image too small");
    if (!(door.x0 >= 0 && door.x0 < door.x1 && door.x1 <= width))
        throw std::invalid_argument("SceneSpec: door x-range outside image");
    if (!(door.y0 >= 0 && door.y0 < door.y1 && door.y1 < height))
        throw std::invalid_argument("SceneSpec: door y-range outside image");
    if (concavity < 0 || floor_y() > height - 2)
        throw std::invalid_argument("SceneSpec: floor line outside image");
    if (gap_px < 1 || door.y1 + gap_px > height)
        throw std::invalid_argument("SceneSpec: gap strip outside image");
    if (gap_delta < 0) throw std::invalid_argument("SceneSpec: gap_delta must be >= 0");
    auto lum_ok = [](int v) { return v >= 0 && v <= 255; };
    if (!lum_ok(wall_lum) || !lum_ok(door_lum) || !lum_ok(floor_lum) || !lum_ok(poster_lum))
        throw std::invalid_argument("SceneSpec: luminance outside [0, 255]");
    if (has_shadow && !(shadow_x0 >= 0 && shadow_x0 < shadow_x1 && shadow_x1 <= width))
        throw std::invalid_argument("SceneSpec: shadow band outside image");
    if (has_shadow && !(shadow_att > 0 && shadow_att <= 1))
        throw std::invalid_argument("SceneSpec: shadow_att must be in (0, 1]");
    if (has_poster && !(poster.x0 >= 0 && poster.x0 < poster.x1 && poster.x1 <= width &&
                        poster.y0 >= 0 && poster.y0 < poster.y1 && poster.y1 <= height))
        throw std::invalid_argument("SceneSpec: poster outside image");
    if (noise_amp < 0 || noise_amp > 64)
        throw std::invalid_argument("SceneSpec: noise_amp out of range");
}

std::string GroundTruth::to_line() const {
    std::ostringstream os;
    os << lighting_name(category) << ' ' << index << ' ' << door.x0 << ' ' << door.y0 << ' '
       << door.x1 << ' ' << door.y1 << ' ' << concavity << ' ' << gap_delta;
    return os.str();
}

GroundTruth GroundTruth::from_line(const std::string& line) {
    std::istringstream is(line);
    std::string cat;
    GroundTruth t;
    if (!(is >> cat >> t.index >> t.door.x0 >> t.door.y0 >> t.door.x1 >> t.door.y1 >>
          t.concavity >> t.gap_delta))
        throw std::runtime_error("bad truth record: " + line);
    t.category = lighting_from_name(cat);
    return t;
}

RenderResult render_scene(const SceneSpec& spec) {
    spec.validate();
    const int W = spec.width, H = spec.height;
    const int fy = spec.floor_y();
    int gap_lum = std::clamp(
        spec.door_lum + (spec.gap_brighter ? spec.gap_delta : -spec.gap_delta), 0, 255);

    RealImage canvas(W, H);
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            double v;
            if (x >= spec.door.x0 && x < spec.door.x1 && y >= spec.door.y0) {
                if (y < spec.door.y1)
                    v = spec.door_lum;
                else if (y < spec.door.y1 + spec.gap_px)
                    v = gap_lum;
                else
                    v = spec.floor_lum;
            } else {
                v = y < fy ? spec.wall_lum : spec.floor_lum;
            }
            canvas.at(x, y) = v;
        }

    if (spec.has_poster)
        for (int y = spec.poster.y0; y < spec.poster.y1; ++y)
            for (int x = spec.poster.x0; x < spec.poster.x1; ++x)
                canvas.at(x, y) = spec.poster_lum;

    if (spec.lighting == Lighting::night)
        for (int x = 0; x < W; ++x) {
            double g = spec.night_gain +
                       spec.night_ramp * (static_cast<double>(x) / (W - 1) - 0.5);
            for (int y = 0; y < H; ++y) canvas.at(x, y) *= g;
        }

    if (spec.has_shadow)
        for (int y = 0; y < H; ++y)
            for (int x = spec.shadow_x0; x < spec.shadow_x1; ++x)
                canvas.at(x, y) *= spec.shadow_att;

    if (spec.noise_amp > 0) {
        SplitMix64 rng(spec.seed);
        for (double& v : canvas.data)
            v += static_cast<double>(rng.range_int(-spec.noise_amp, spec.noise_amp));
    }

    RenderResult out{quantize(canvas), {}};
    out.truth.category = spec.lighting;
    out.truth.door = spec.door;
    out.truth.concavity = spec.concavity;
    out.truth.gap_delta = gap_lum - spec.door_lum;
    return out;
}

SceneSpec sample_scene_spec(Lighting category, int width, int height, SplitMix64& rng) {
    SceneSpec s;
    s.width = width;
    s.height = height;
    s.lighting = category;

    // Door and floor are kept close in brightness with the gap an extremum
    // beyond both, so the bottom edge survives blur despite the opposing
    // gap/floor step right below it.
    s.wall_lum = static_cast<int>(rng.range_int(90, 150));
    s.door_lum = s.wall_lum + (rng.chance(0.5) ? 1 : -1) * static_cast<int>(rng.range_int(45, 70));
    s.floor_lum = s.door_lum + static_cast<int>(rng.range_int(-10, 10));

    const int margin = 12;
    int dw = static_cast<int>(std::lround(rng.range_real(0.15, 0.45) * width));
    s.door.x0 = static_cast<int>(rng.range_int(margin, width - margin - dw));
    s.door.x1 = s.door.x0 + dw;
    s.door.y0 = static_cast<int>(std::lround(rng.range_real(0.10, 0.38) * height));
    int fy = static_cast<int>(std::lround(rng.range_real(0.68, 0.85) * height));
    s.concavity = static_cast<int>(rng.range_int(2, 10));
    s.door.y1 = fy - s.concavity;
    s.gap_px = static_cast<int>(rng.range_int(2, std::min(6, s.concavity)));
    int ext = static_cast<int>(rng.range_int(35, 70));
    int lo_l = std::min(s.door_lum, s.floor_lum), hi_l = std::max(s.door_lum, s.floor_lum);
    bool dark_ok = lo_l - ext >= 5, bright_ok = hi_l + ext <= 250;
    bool bright = !dark_ok || (bright_ok && rng.chance(0.5));
    int gap_lum = bright ? hi_l + ext : lo_l - ext;
    s.gap_brighter = gap_lum > s.door_lum;
    s.gap_delta = std::abs(gap_lum - s.door_lum);

    if (category == Lighting::night) {
        s.night_gain = 0.6;
        s.night_ramp = (rng.chance(0.5) ? 1 : -1) * rng.range_real(0.10, 0.20);
    }

    if (category == Lighting::shadow) {
        const int clearance = 10;
        int bw = static_cast<int>(std::lround(rng.range_real(0.10, 0.25) * width));
        bool left_first = rng.chance(0.5);
        for (int attempt = 0; attempt < 2 && !s.has_shadow; ++attempt) {
            bool left = attempt == 0 ? left_first : !left_first;
            if (left && s.door.x0 - clearance - bw >= 0) {
                s.shadow_x0 = static_cast<int>(rng.range_int(0, s.door.x0 - clearance - bw));
                s.shadow_x1 = s.shadow_x0 + bw;
                s.has_shadow = true;
            } else if (!left && s.door.x1 + clearance + bw <= width) {
                s.shadow_x0 = static_cast<int>(rng.range_int(s.door.x1 + clearance, width - bw));
                s.shadow_x1 = s.shadow_x0 + bw;
                s.has_shadow = true;
            }
        }
        s.shadow_att = rng.range_real(0.60, 0.85);
    }

    if (rng.chance(0.8)) {
        const int clearance = 10;
        int pw = static_cast<int>(std::lround(rng.range_real(0.08, 0.25) * width));
        int py0 = static_cast<int>(std::lround(rng.range_real(0.12, 0.30) * height));
        int py1 = static_cast<int>(std::lround(rng.range_real(0.50, 0.58) * height));
        bool left_first = rng.chance(0.5);
        for (int attempt = 0; attempt < 2 && !s.has_poster; ++attempt) {
            bool left = attempt == 0 ? left_first : !left_first;
            int lo = left ? 5 : s.door.x1 + clearance;
            int hi = left ? s.door.x0 - clearance - pw : width - 5 - pw;
            if (hi < lo) continue;
            s.poster.x0 = static_cast<int>(rng.range_int(lo, hi));
            s.poster.x1 = s.poster.x0 + pw;
            s.poster.y0 = py0;
            s.poster.y1 = py1;
            s.has_poster = true;
        }
        s.poster_lum =
            s.wall_lum + (rng.chance(0.5) ? 1 : -1) * static_cast<int>(rng.range_int(30, 60));
    }

    s.noise_amp = static_cast<int>(rng.range_int(0, 6));
    s.seed = rng.next();
    return s;
}

std::vector<CorpusEntry> generate_corpus(const std::string& dir, int n_per_category,
                                         std::uint64_t seed, int width, int height) {
    if (n_per_category < 1)
        throw std::invalid_argument("generate_corpus: n_per_category must be >= 1");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create directory " + dir + ": " + ec.message());

    SplitMix64 rng(seed);
    std::vector<CorpusEntry> entries;
    std::ostringstream truth;
    for (Lighting cat : {Lighting::day, Lighting::night, Lighting::shadow}) {
        fs::path cat_dir = fs::path(dir) / lighting_name(cat);
        fs::create_directories(cat_dir, ec);
        if (ec)
            throw std::runtime_error("cannot create directory " + cat_dir.string() + ": " +
                                     ec.message());
        for (int i = 0; i < n_per_category; ++i) {
            SceneSpec spec = sample_scene_spec(cat, width, height, rng);
            RenderResult r = render_scene(spec);
            r.truth.index = i;

            std::string rel = std::string(lighting_name(cat)) + "/" + std::to_string(i) + ".pgm";
            save_pnm_file((fs::path(dir) / rel).string(), r.image);
            truth << r.truth.to_line() << '\n';
            entries.push_back({r.truth, rel});
        }
    }

    std::ofstream tf(fs::path(dir) / "truth.txt");
    if (!tf) throw std::runtime_error("cannot write truth.txt in " + dir);
    tf << truth.str();
    if (!tf) throw std::runtime_error("write failed: truth.txt");
    return entries;
}

}  // namespace doorsom
