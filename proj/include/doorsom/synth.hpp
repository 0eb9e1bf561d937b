#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "doorsom/image.hpp"
#include "doorsom/rng.hpp"

namespace doorsom {

enum class Lighting { day, night, shadow };

const char* lighting_name(Lighting l);
Lighting lighting_from_name(const std::string& name);

struct Box {
    int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // half-open, x0 < x1 and y0 < y1
    bool operator==(const Box&) const = default;
};

struct SceneSpec {
    int width = 320;
    int height = 240;
    Box door;
    int concavity = 6;        // px between door bottom and the floor line
    int gap_px = 2;           // gap strip height
    bool gap_brighter = false;
    int gap_delta = 40;       // luminance offset of the gap vs the door face
    int wall_lum = 120;
    int door_lum = 170;
    int floor_lum = 80;
    Lighting lighting = Lighting::day;
    double night_gain = 0.6;  // mean gain of the night ramp
    double night_ramp = 0.15; // signed gain difference across the image
    bool has_shadow = false;
    int shadow_x0 = 0;
    int shadow_x1 = 0;
    double shadow_att = 0.75;
    bool has_poster = false;
    Box poster;
    int poster_lum = 60;
    int noise_amp = 0;        // additive uniform noise, +/- this many levels
    std::uint64_t seed = 0;

    int floor_y() const { return door.y1 + concavity; }
    void validate() const;
};

struct GroundTruth {
    Lighting category = Lighting::day;
    int index = 0;
    Box door;
    int concavity = 0;
    int gap_delta = 0;  // signed: positive when the gap is brighter than the door

    std::string to_line() const;
    static GroundTruth from_line(const std::string& line);
};

struct RenderResult {
    GrayImage image;
    GroundTruth truth;
};

RenderResult render_scene(const SceneSpec& spec);

SceneSpec sample_scene_spec(Lighting category, int width, int height, SplitMix64& rng);

struct CorpusEntry {
    GroundTruth truth;
    std::string path;  // PGM file relative to the corpus directory
};

// Writes <dir>/<category>/<index>.pgm for each scene plus <dir>/truth.txt.
std::vector<CorpusEntry> generate_corpus(const std::string& dir, int n_per_category,
                                         std::uint64_t seed, int width = 320, int height = 240);

}  // namespace doorsom
