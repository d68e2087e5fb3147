#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "biolab/core.hpp"

namespace biolab::analysis {

struct ImageTooSmall : std::runtime_error {
    explicit ImageTooSmall(const std::string& what) : std::runtime_error(what) {}
};

// Per-cell undirected ridge direction in [0, pi) plus a coherence in [0,1].
struct OrientationField {
    int cols = 0;
    int rows = 0;
    int cell = 8;  // pixels per cell
    std::vector<double> angles;     // row-major, cols*rows
    std::vector<double> coherence;  // same shape

    double angle_at(int cx, int cy) const { return angles[static_cast<size_t>(cy) * cols + cx]; }
    double coh_at(int cx, int cy) const { return coherence[static_cast<size_t>(cy) * cols + cx]; }

    // Field angle for a pixel coordinate (cell containing the pixel, clamped).
    double angle_at_pixel(int x, int y) const {
        int cx = std::min(std::max(x / cell, 0), cols - 1);
        int cy = std::min(std::max(y / cell, 0), rows - 1);
        return angle_at(cx, cy);
    }
};

struct SkeletonImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> bits;  // row-major, 1 = ridge

    uint8_t at(int x, int y) const { return bits[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return bits[static_cast<size_t>(y) * width + x]; }
};

// Gradient-based orientation estimate: per cell, accumulate the doubled-angle
// gradient tensor and halve the resulting angle. Coherence is the accumulated
// vector magnitude over the total gradient energy.
OrientationField orientation_from_image(const GrayImage& img, int cell = 8);

// Local-mean binarization (15x15 window, ridge = darker than mean - 2)
// followed by two-subiteration morphological thinning to a fixpoint.
SkeletonImage binarize_and_thin(const GrayImage& img);

// Thinning alone, for idempotence checks.
SkeletonImage thin(SkeletonImage s);

// Crossing number of the 8-neighborhood cycle around (x, y). 1 = termination,
// 3 = bifurcation.
int crossing_number(const SkeletonImage& s, int x, int y);

struct ExtractParams {
    int cell = 8;
    int border_margin = 10;    // drop minutiae this close to the mask border
    double merge_dist = 8.0;   // merge minutiae closer than this
    int resolution = 500;
};

MinutiaeTemplate extract_minutiae(const GrayImage& img, const ExtractParams& p = {});

struct AlterationResult {
    double score = 0.0;
    bool altered = false;
};

// Orientation-discontinuity score plus a minutiae-density outlier term.
// Threshold calibrated offline as the 95th percentile over 50 seeded clean
// synthetic prints (seeds 0..49, 256x288, n = 25).
extern const double kAlterationThreshold;

AlterationResult alteration_score(const GrayImage& img);

}  // namespace biolab::analysis
