#pragma once

#include <stdexcept>
#include <vector>

#include "biolab/analysis.hpp"
#include "biolab/core.hpp"

namespace biolab::synth {

using analysis::OrientationField;

struct EmptyTemplate : std::runtime_error {
    EmptyTemplate() : std::runtime_error("template has no minutiae") {}
};

struct NoSeed : std::runtime_error {
    NoSeed() : std::runtime_error("no seed region to grow from") {}
};

// Fingerprint silhouette: four quarter-ellipse arcs around a center, the
// horizontal extents a1 (left) / a2 (right) joined by the rectangle they
// span, capped above by b1 and below by b2.
struct AreaModel {
    double b1 = 0, b2 = 0;  // vertical cap heights (up, down)
    double a1 = 0, a2 = 0;  // horizontal half-widths (left, right)
    double cx = 0, cy = 0;
};

bool area_contains(const AreaModel& m, double x, double y);

struct SynthesisParams {
    int ridge_period = 9;      // pixels per ridge cycle
    int prototype_size = 15;   // odd
    int growth_iters_max = 10000;
    int noise_dots = 3;        // per 10^4 px^2 of area
    int dot_radius_min = 1;
    int dot_radius_max = 3;
    int smoothing = 1;         // box blur radius
    int margin = 20;           // initial area parameter / bbox margin
};

// Greedy growth of the four area parameters until every minutia is inside.
AreaModel fit_area(const MinutiaeTemplate& t, const SynthesisParams& p);

// Inverse-squared-distance interpolation of the minutiae directions on the
// doubled-angle circle; coherence is the resultant length.
OrientationField orientation_from_minutiae(const MinutiaeTemplate& t, int cell = 8);

struct StampResult {
    GrayImage image;             // mid-gray background with dark prototypes
    std::vector<uint8_t> known;  // row-major, 1 = stamped
};

StampResult stamp_prototypes(const MinutiaeTemplate& t, const OrientationField& field,
                             const SynthesisParams& p);

// Frontier expansion with an even-symmetric Gabor filter oriented by the
// field; pixels outside the area stay white.
GrayImage grow_ridges(const GrayImage& seedimg, std::vector<uint8_t> known,
                      const OrientationField& field, const AreaModel& area,
                      const SynthesisParams& p);

GrayImage add_noise(const GrayImage& img, const AreaModel& area, const SynthesisParams& p,
                    Seed seed);

// Full pipeline: fit_area -> orientation_from_minutiae -> stamp_prototypes
// -> grow_ridges -> add_noise.
GrayImage reconstruct(const MinutiaeTemplate& t, const SynthesisParams& p, Seed seed);

enum class ScarStyle { Erase, Scramble };

struct Scar {
    int cx = 0;
    int cy = 0;
    int radius = 1;
    ScarStyle style = ScarStyle::Erase;
};

GrayImage obliterate(const GrayImage& img, const std::vector<Scar>& scars, Seed seed);

}  // namespace biolab::synth
