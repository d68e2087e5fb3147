#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace biolab {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

enum class MinutiaKind : uint8_t { Termination = 0, Bifurcation = 1 };

struct Minutia {
    int x = 0;
    int y = 0;
    double theta = 0.0;  // ridge direction, [0, 2pi)
    MinutiaKind kind = MinutiaKind::Termination;
};

struct MinutiaeTemplate {
    int width = 0;
    int height = 0;
    int resolution = 500;  // dpi
    std::vector<Minutia> minutiae;

    bool in_bounds(const Minutia& m) const {
        return m.x >= 0 && m.x < width && m.y >= 0 && m.y < height;
    }
};

struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> pixels;  // row-major, width*height

    GrayImage() = default;
    GrayImage(int w, int h, uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

    uint8_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
    uint8_t& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    bool contains(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    bool operator==(const GrayImage& o) const = default;
};

// Similarity in [0,1]; acceptance iff value >= tau.
struct MatchScore {
    double value = 0.0;
};

enum class Decision : uint8_t { Accept, Reject };

constexpr double kDefaultTau = 0.7;

inline Decision decide(MatchScore s, double tau) {
    return s.value >= tau ? Decision::Accept : Decision::Reject;
}

// 64-bit seed for a deterministic pseudo-random stream.
struct Seed {
    uint64_t value = 0;
};

// Deterministic PRNG with hand-rolled distributions so that streams are
// bit-identical across platforms and standard-library versions.
class Rng {
public:
    explicit Rng(Seed seed) : state_(seed.value) {
        // splitmix64 warm-up so nearby seeds diverge immediately
        for (int i = 0; i < 4; ++i) next_u64();
    }

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // uniform integer in [lo, hi] inclusive
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int64_t>(next_u64() % span);
    }

    double gaussian(double mean, double sd) {
        // Box-Muller, one value per call (the partner draw is discarded)
        double u1 = uniform();
        double u2 = uniform();
        if (u1 < 1e-300) u1 = 1e-300;
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sd * r * std::cos(kTwoPi * u2);
    }

    // Derive an independent sub-stream seed, e.g. per trial or per target.
    Seed derive(uint64_t salt) {
        uint64_t z = state_ ^ (salt * 0xD6E8FEB86659FD93ULL + 0xA5A5A5A5A5A5A5A5ULL);
        z = (z ^ (z >> 32)) * 0xD6E8FEB86659FD93ULL;
        return Seed{z ^ (z >> 32)};
    }

private:
    uint64_t state_;
};

inline Seed derive_seed(Seed base, uint64_t salt) {
    uint64_t z = base.value ^ (salt * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Seed{z ^ (z >> 31)};
}

// Fold an angle into [0, 2pi).
inline double wrap_angle_2pi(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

// Fold a ridge angle into [0, pi).
inline double wrap_angle_pi(double a) {
    a = std::fmod(a, kPi);
    if (a < 0) a += kPi;
    return a;
}

// Smallest difference between two ridge orientations under pi-periodicity.
// Result in [0, pi/2]; zero iff a == b (mod pi).
inline double ridge_angle_diff(double a, double b) {
    double d = wrap_angle_pi(a - b);
    return std::min(d, kPi - d);
}

// Round half-up, then clamp into 0..255.
inline int clamp_pixel(double v) {
    double r = std::floor(v + 0.5);
    if (r < 0) return 0;
    if (r > 255) return 255;
    return static_cast<int>(r);
}

// Random template with n minutiae uniformly placed in a w x h frame.
MinutiaeTemplate random_template(Rng& rng, int n, int width, int height, int resolution = 500);

}  // namespace biolab
