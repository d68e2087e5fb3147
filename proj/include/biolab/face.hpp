#pragma once

#include <stdexcept>
#include <vector>

#include "biolab/core.hpp"

namespace biolab::face {

struct BadDimensions : std::runtime_error {
    explicit BadDimensions(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::runtime_error {
    DimensionMismatch() : std::runtime_error("image dimensions do not match model") {}
};

struct KTooLarge : std::runtime_error {
    KTooLarge() : std::runtime_error("requested more eigenfaces than the data supports") {}
};

struct DegenerateData : std::runtime_error {
    DegenerateData() : std::runtime_error("all database images are identical") {}
};

struct FaceDb {
    std::vector<GrayImage> images;  // uniform dimensions, >= 2 entries
    Seed seed;
};

struct FaceModel {
    int width = 0;
    int height = 0;
    std::vector<double> mean;                    // width*height
    std::vector<std::vector<double>> eigenfaces; // K orthonormal basis images
    std::vector<double> eigenvalues;             // nonincreasing, positive
};

using FaceCoefficients = std::vector<double>;

// Procedural face database: a fixed mean face (bright ellipse, eye disks,
// mouth bar) plus a seeded combination of low-order 2-D cosine basis images
// and per-pixel noise. Deterministic per (seed, index).
FaceDb gen_face_db(Seed seed, int count, int width, int height);

// PCA via the Gram matrix of mean-centered images; eigenface sign fixed so
// the largest-magnitude pixel is positive.
FaceModel train_eigenfaces(const FaceDb& db, int k);

FaceCoefficients project(const FaceModel& model, const GrayImage& img);

// Render mean + sum(c_i * EF_i) back into pixel space (clamped).
GrayImage render_from_coefficients(const FaceModel& model, const FaceCoefficients& c);

// score = 1 / (1 + ||project(a) - project(b)|| / d0); d0 defaults to
// sqrt(K) * 16.
MatchScore compare_faces(const FaceModel& model, const GrayImage& a, const GrayImage& b,
                         double d0 = 0.0);

}  // namespace biolab::face
