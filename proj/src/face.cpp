#include "biolab/face.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace biolab::face {

namespace {

// The shared geometry every synthetic face is built on.
double mean_face_value(int x, int y, int w, int h) {
    double nx = (x + 0.5) / w - 0.5;  // [-0.5, 0.5]
    double ny = (y + 0.5) / h - 0.5;
    double v = 40.0;  // dark ground
    // head ellipse
    if ((nx * nx) / (0.38 * 0.38) + (ny * ny) / (0.46 * 0.46) <= 1.0) v = 180.0;
    // eyes
    auto eye = [&](double ex) {
        double dx = nx - ex, dy = ny + 0.12;
        return dx * dx + dy * dy <= 0.055 * 0.055;
    };
    if (eye(-0.14) || eye(0.14)) v = 90.0;
    // mouth bar
    if (std::fabs(ny - 0.18) <= 0.035 && std::fabs(nx) <= 0.13) v = 100.0;
    return v;
}

}  // namespace

FaceDb gen_face_db(Seed seed, int count, int width, int height) {
    if (count < 2) throw BadDimensions("face database needs at least 2 images");
    if (width < 16 || height < 16) throw BadDimensions("face images must be >= 16x16");

    FaceDb db;
    db.seed = seed;
    db.images.reserve(static_cast<size_t>(count));
    for (int idx = 0; idx < count; ++idx) {
        Rng rng(derive_seed(seed, static_cast<uint64_t>(idx)));
        // amplitudes for the first 8x8 cosine basis functions
        double amp[8][8];
        for (int u = 0; u < 8; ++u) {
            for (int v = 0; v < 8; ++v) {
                amp[u][v] = rng.uniform(-24.0, 24.0) / (1.0 + u + v);
            }
        }
        GrayImage img(width, height);
        for (int y = 0; y < height; ++y) {
            for (int x = 0; x < width; ++x) {
                double val = mean_face_value(x, y, width, height);
                for (int u = 0; u < 8; ++u) {
                    for (int v = 0; v < 8; ++v) {
                        if (u == 0 && v == 0) continue;
                        val += amp[u][v] *
                               std::cos(kPi * u * (x + 0.5) / width) *
                               std::cos(kPi * v * (y + 0.5) / height);
                    }
                }
                val += rng.gaussian(0.0, 2.0);
                img.at(x, y) = static_cast<uint8_t>(clamp_pixel(val));
            }
        }
        db.images.push_back(std::move(img));
    }
    return db;
}

FaceModel train_eigenfaces(const FaceDb& db, int k) {
    const int m = static_cast<int>(db.images.size());
    if (m < 2) throw BadDimensions("face database needs at least 2 images");
    const int w = db.images[0].width, h = db.images[0].height;
    const int n = w * h;
    if (k < 1 || k >= m) throw KTooLarge();

    Eigen::MatrixXd data(n, m);
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) data(i, j) = db.images[static_cast<size_t>(j)].pixels[static_cast<size_t>(i)];
    }
    Eigen::VectorXd mean = data.rowwise().mean();
    Eigen::MatrixXd centered = data.colwise() - mean;

    // Gram route: m x m instead of n x n
    Eigen::MatrixXd gram = centered.transpose() * centered / static_cast<double>(m);
    if (gram.norm() < 1e-9) throw DegenerateData();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");

    FaceModel model;
    model.width = w;
    model.height = h;
    model.mean.assign(mean.data(), mean.data() + n);

    // SelfAdjointEigenSolver sorts ascending; take the top k from the back
    for (int r = 0; r < k; ++r) {
        int col = m - 1 - r;
        double lambda = solver.eigenvalues()(col);
        if (lambda <= 1e-9) throw KTooLarge();
        Eigen::VectorXd ef = centered * solver.eigenvectors().col(col);
        ef.normalize();
        // sign convention: largest-magnitude pixel positive
        int max_idx = 0;
        for (int i = 1; i < n; ++i) {
            if (std::fabs(ef(i)) > std::fabs(ef(max_idx))) max_idx = i;
        }
        if (ef(max_idx) < 0) ef = -ef;
        model.eigenfaces.emplace_back(ef.data(), ef.data() + n);
        model.eigenvalues.push_back(lambda);
    }
    return model;
}

FaceCoefficients project(const FaceModel& model, const GrayImage& img) {
    if (img.width != model.width || img.height != model.height) throw DimensionMismatch();
    const size_t n = model.mean.size();
    FaceCoefficients c(model.eigenfaces.size(), 0.0);
    for (size_t k = 0; k < model.eigenfaces.size(); ++k) {
        const std::vector<double>& ef = model.eigenfaces[k];
        double dot = 0.0;
        for (size_t i = 0; i < n; ++i) {
            dot += (img.pixels[i] - model.mean[i]) * ef[i];
        }
        c[k] = dot;
    }
    return c;
}

GrayImage render_from_coefficients(const FaceModel& model, const FaceCoefficients& c) {
    GrayImage img(model.width, model.height);
    const size_t n = model.mean.size();
    for (size_t i = 0; i < n; ++i) {
        double v = model.mean[i];
        for (size_t k = 0; k < c.size() && k < model.eigenfaces.size(); ++k) {
            v += c[k] * model.eigenfaces[k][i];
        }
        img.pixels[i] = static_cast<uint8_t>(clamp_pixel(v));
    }
    return img;
}

MatchScore compare_faces(const FaceModel& model, const GrayImage& a, const GrayImage& b,
                         double d0) {
    FaceCoefficients ca = project(model, a);
    FaceCoefficients cb = project(model, b);
    if (d0 <= 0.0) d0 = std::sqrt(static_cast<double>(model.eigenfaces.size())) * 16.0;
    double dist2 = 0.0;
    for (size_t i = 0; i < ca.size(); ++i) {
        double d = ca[i] - cb[i];
        dist2 += d * d;
    }
    return MatchScore{1.0 / (1.0 + std::sqrt(dist2) / d0)};
}

}  // namespace biolab::face
