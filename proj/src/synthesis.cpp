#include "biolab/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace biolab::synth {

namespace {

constexpr double kRidgeDark = 20.0;
constexpr double kValleyBright = 235.0;
// Gabor output gain relative to the ideal-stripe response; > 1 so that fully
// supported pixels saturate into solid ridges.
constexpr double kGaborGain = 300.0;

double ellipse_term(double d, double semi) {
    if (semi <= 0.0) return d == 0.0 ? 0.0 : 2.0;  // degenerate axis
    double q = d / semi;
    return q * q;
}

}  // namespace

bool area_contains(const AreaModel& m, double x, double y) {
    double dx = x - m.cx;
    double dy = y - m.cy;
    double hw = dx < 0 ? m.a1 : m.a2;
    double vh = dy < 0 ? m.b1 : m.b2;
    return ellipse_term(dx, hw) + ellipse_term(dy, vh) <= 1.0 + 1e-12;
}

AreaModel fit_area(const MinutiaeTemplate& t, const SynthesisParams& p) {
    if (t.minutiae.empty()) throw EmptyTemplate();
    AreaModel m;
    double sx = 0, sy = 0;
    for (const Minutia& mi : t.minutiae) {
        sx += mi.x;
        sy += mi.y;
    }
    m.cx = sx / static_cast<double>(t.minutiae.size());
    m.cy = sy / static_cast<double>(t.minutiae.size());
    m.b1 = m.b2 = m.a1 = m.a2 = p.margin;

    for (;;) {
        const Minutia* outside = nullptr;
        for (const Minutia& mi : t.minutiae) {
            if (!area_contains(m, mi.x, mi.y)) { outside = &mi; break; }
        }
        if (!outside) break;
        double dx = outside->x - m.cx;
        double dy = outside->y - m.cy;
        // derivative of the exterior distance wrt each growable parameter;
        // pick the steepest descent, ties in b1 > b2 > a1 > a2 priority
        double* params[4] = {&m.b1, &m.b2, &m.a1, &m.a2};
        double gain[4] = {0, 0, 0, 0};
        if (dy < 0) gain[0] = 2.0 * dy * dy / (m.b1 * m.b1 * m.b1);
        if (dy > 0) gain[1] = 2.0 * dy * dy / (m.b2 * m.b2 * m.b2);
        if (dx < 0) gain[2] = 2.0 * dx * dx / (m.a1 * m.a1 * m.a1);
        if (dx > 0) gain[3] = 2.0 * dx * dx / (m.a2 * m.a2 * m.a2);
        int best = 0;
        for (int i = 1; i < 4; ++i) {
            if (gain[i] > gain[best]) best = i;
        }
        *params[best] += 1.0;
    }
    return m;
}

OrientationField orientation_from_minutiae(const MinutiaeTemplate& t, int cell) {
    if (t.minutiae.empty()) throw EmptyTemplate();
    OrientationField f;
    f.cell = cell;
    f.cols = (t.width + cell - 1) / cell;
    f.rows = (t.height + cell - 1) / cell;
    f.angles.assign(static_cast<size_t>(f.cols) * f.rows, 0.0);
    f.coherence.assign(static_cast<size_t>(f.cols) * f.rows, 0.0);

    for (int cy = 0; cy < f.rows; ++cy) {
        for (int cx = 0; cx < f.cols; ++cx) {
            double px = cx * cell + cell / 2.0;
            double py = cy * cell + cell / 2.0;
            double acc_c = 0.0, acc_s = 0.0, wsum = 0.0;
            double nearest_d2 = 1e300;
            size_t nearest = 0;
            for (size_t i = 0; i < t.minutiae.size(); ++i) {
                const Minutia& mi = t.minutiae[i];
                double dx = px - mi.x, dy = py - mi.y;
                double d2 = dx * dx + dy * dy;
                if (d2 < nearest_d2) { nearest_d2 = d2; nearest = i; }
                double w = 1.0 / (d2 + 1.0);
                acc_c += w * std::cos(2.0 * mi.theta);
                acc_s += w * std::sin(2.0 * mi.theta);
                wsum += w;
            }
            size_t idx = static_cast<size_t>(cy) * f.cols + cx;
            double mag = std::sqrt(acc_c * acc_c + acc_s * acc_s);
            if (mag < 1e-9) {
                // antipodal cancellation: fall back to the nearest minutia
                f.angles[idx] = wrap_angle_pi(t.minutiae[nearest].theta);
                f.coherence[idx] = 0.0;
            } else {
                f.angles[idx] = wrap_angle_pi(0.5 * std::atan2(acc_s, acc_c));
                f.coherence[idx] = mag / wsum;
            }
        }
    }
    return f;
}

namespace {

void paint_disk(GrayImage& img, std::vector<uint8_t>& known, double cx, double cy,
                double radius, double value) {
    int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
    int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + radius)));
    int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
    int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + radius)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= radius * radius) {
                img.at(x, y) = static_cast<uint8_t>(clamp_pixel(value));
                known[static_cast<size_t>(y) * img.width + x] = 1;
            }
        }
    }
}

void paint_stroke(GrayImage& img, std::vector<uint8_t>& known, double x0, double y0,
                  double dir, double length, double half_width, double value) {
    for (double s = 0.0; s <= length; s += 0.5) {
        paint_disk(img, known, x0 + s * std::cos(dir), y0 + s * std::sin(dir), half_width,
                   value);
    }
}

}  // namespace

StampResult stamp_prototypes(const MinutiaeTemplate& t, const OrientationField& field,
                             const SynthesisParams& p) {
    (void)field;
    StampResult r;
    r.image = GrayImage(t.width, t.height, 128);
    r.known.assign(static_cast<size_t>(t.width) * t.height, 0);

    double patch_radius = p.prototype_size / 2.0;
    double ridge_half = std::max(1.0, std::floor(p.ridge_period / 3.0 + 0.5) / 2.0);

    for (const Minutia& m : t.minutiae) {
        // valley backdrop first, then the dark ridge geometry over it
        paint_disk(r.image, r.known, m.x, m.y, patch_radius, kValleyBright);
        if (m.kind == MinutiaKind::Termination) {
            // ridge ends at the minutia and extends along theta
            paint_stroke(r.image, r.known, m.x, m.y, m.theta, patch_radius, ridge_half,
                         kRidgeDark);
        } else {
            // stem arrives against theta; fork leaves at theta +/- pi/6
            paint_stroke(r.image, r.known, m.x, m.y, m.theta + kPi, patch_radius, ridge_half,
                         kRidgeDark);
            paint_stroke(r.image, r.known, m.x, m.y, m.theta - kPi / 6, patch_radius,
                         ridge_half, kRidgeDark);
            paint_stroke(r.image, r.known, m.x, m.y, m.theta + kPi / 6, patch_radius,
                         ridge_half, kRidgeDark);
        }
    }
    return r;
}

namespace {

struct GaborKernel {
    int radius;
    std::vector<double> taps;  // (2r+1)^2
    double ideal_response;     // response to a full-contrast aligned stripe field
};

GaborKernel make_gabor(double theta, int ridge_period) {
    GaborKernel k;
    double sigma = ridge_period / 2.0;
    k.radius = static_cast<int>(std::ceil(2.5 * sigma));
    int side = 2 * k.radius + 1;
    k.taps.assign(static_cast<size_t>(side) * side, 0.0);
    double lambda = ridge_period;
    double sum = 0.0;
    for (int dy = -k.radius; dy <= k.radius; ++dy) {
        for (int dx = -k.radius; dx <= k.radius; ++dx) {
            // u: axis perpendicular to the ridge direction
            double u = -dx * std::sin(theta) + dy * std::cos(theta);
            double v = dx * std::cos(theta) + dy * std::sin(theta);
            double env = std::exp(-(u * u + v * v) / (2.0 * sigma * sigma));
            double tap = env * std::cos(kTwoPi * u / lambda);
            k.taps[static_cast<size_t>(dy + k.radius) * side + (dx + k.radius)] = tap;
            sum += tap;
        }
    }
    // remove DC so a flat region yields zero response
    double mean = sum / (static_cast<double>(side) * side);
    k.ideal_response = 0.0;
    for (int dy = -k.radius; dy <= k.radius; ++dy) {
        for (int dx = -k.radius; dx <= k.radius; ++dx) {
            size_t idx = static_cast<size_t>(dy + k.radius) * side + (dx + k.radius);
            k.taps[idx] -= mean;
            double u = -dx * std::sin(theta) + dy * std::cos(theta);
            k.ideal_response += k.taps[idx] * 127.0 * std::cos(kTwoPi * u / lambda);
        }
    }
    return k;
}

}  // namespace

GrayImage grow_ridges(const GrayImage& seedimg, std::vector<uint8_t> known,
                      const OrientationField& field, const AreaModel& area,
                      const SynthesisParams& p) {
    GrayImage img = seedimg;
    const int w = img.width, h = img.height;

    std::vector<uint8_t> in_area(static_cast<size_t>(w) * h, 0);
    size_t area_px = 0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (area_contains(area, x, y)) {
                in_area[static_cast<size_t>(y) * w + x] = 1;
                ++area_px;
            }
        }
    }

    bool any_known = std::find(known.begin(), known.end(), 1) != known.end();
    if (!any_known) {
        if (area_px == 0) throw NoSeed();
        int sx = std::min(w - 1, std::max(0, static_cast<int>(area.cx)));
        int sy = std::min(h - 1, std::max(0, static_cast<int>(area.cy)));
        known[static_cast<size_t>(sy) * w + sx] = 1;
    }

    // kernels keyed by the quantized field angle
    std::map<int, GaborKernel> kernels;
    auto kernel_for = [&](double theta) -> const GaborKernel& {
        int key = static_cast<int>(std::floor(wrap_angle_pi(theta) / kPi * 64.0)) % 64;
        auto it = kernels.find(key);
        if (it == kernels.end()) {
            it = kernels.emplace(key, make_gabor((key + 0.5) * kPi / 64.0, p.ridge_period))
                     .first;
        }
        return it->second;
    };

    std::vector<std::pair<int, int>> frontier;
    for (int iter = 0; iter < p.growth_iters_max; ++iter) {
        frontier.clear();
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                size_t idx = static_cast<size_t>(y) * w + x;
                if (known[idx] || !in_area[idx]) continue;
                bool adjacent = false;
                for (int dy = -1; dy <= 1 && !adjacent; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = x + dx, ny = y + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        if (known[static_cast<size_t>(ny) * w + nx]) { adjacent = true; break; }
                    }
                }
                if (adjacent) frontier.emplace_back(x, y);
            }
        }
        if (frontier.empty()) break;

        for (auto [x, y] : frontier) {
            const GaborKernel& k = kernel_for(field.angle_at_pixel(x, y));
            int side = 2 * k.radius + 1;
            double resp = 0.0;
            for (int dy = -k.radius; dy <= k.radius; ++dy) {
                int ny = y + dy;
                if (ny < 0 || ny >= h) continue;
                for (int dx = -k.radius; dx <= k.radius; ++dx) {
                    int nx = x + dx;
                    if (nx < 0 || nx >= w) continue;
                    size_t idx = static_cast<size_t>(ny) * w + nx;
                    if (!in_area[idx]) continue;  // outside reads as neutral
                    double tap =
                        k.taps[static_cast<size_t>(dy + k.radius) * side + (dx + k.radius)];
                    resp += tap * (img.pixels[idx] - 128.0);
                }
            }
            double amp = k.ideal_response > 1e-9 ? kGaborGain * resp / k.ideal_response : 0.0;
            size_t idx = static_cast<size_t>(y) * w + x;
            img.pixels[idx] = static_cast<uint8_t>(clamp_pixel(128.0 + amp));
            known[idx] = 1;
        }
    }

    for (size_t i = 0; i < in_area.size(); ++i) {
        if (!in_area[i]) img.pixels[i] = 255;
    }
    return img;
}

GrayImage add_noise(const GrayImage& img, const AreaModel& area, const SynthesisParams& p,
                    Seed seed) {
    GrayImage out = img;
    Rng rng(seed);

    size_t area_px = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (area_contains(area, x, y)) ++area_px;
        }
    }
    int dots = static_cast<int>(p.noise_dots * static_cast<double>(area_px) / 1e4);

    for (int i = 0; i < dots; ++i) {
        // seeded rejection sampling for an in-area center
        int cx = 0, cy = 0;
        for (int tries = 0; tries < 64; ++tries) {
            cx = static_cast<int>(rng.uniform_int(0, img.width - 1));
            cy = static_cast<int>(rng.uniform_int(0, img.height - 1));
            if (area_contains(area, cx, cy)) break;
        }
        double ra = rng.uniform(p.dot_radius_min, p.dot_radius_max);
        double rb = rng.uniform(p.dot_radius_min, p.dot_radius_max);
        double rot = rng.uniform(0.0, kPi);
        int bound = static_cast<int>(std::ceil(std::max(ra, rb)));
        for (int dy = -bound; dy <= bound; ++dy) {
            for (int dx = -bound; dx <= bound; ++dx) {
                int x = cx + dx, y = cy + dy;
                if (!out.contains(x, y)) continue;
                double u = dx * std::cos(rot) + dy * std::sin(rot);
                double v = -dx * std::sin(rot) + dy * std::cos(rot);
                if (ellipse_term(u, ra) + ellipse_term(v, rb) <= 1.0) out.at(x, y) = 255;
            }
        }
    }

    if (p.smoothing > 0) {
        GrayImage blurred = out;
        int r = p.smoothing;
        for (int y = 0; y < out.height; ++y) {
            for (int x = 0; x < out.width; ++x) {
                double s = 0.0;
                int n = 0;
                for (int dy = -r; dy <= r; ++dy) {
                    for (int dx = -r; dx <= r; ++dx) {
                        int nx = x + dx, ny = y + dy;
                        if (!out.contains(nx, ny)) continue;
                        s += out.at(nx, ny);
                        ++n;
                    }
                }
                blurred.at(x, y) = static_cast<uint8_t>(clamp_pixel(s / n));
            }
        }
        out = blurred;
    }
    return out;
}

GrayImage reconstruct(const MinutiaeTemplate& t, const SynthesisParams& p, Seed seed) {
    if (t.minutiae.empty()) throw EmptyTemplate();
    AreaModel area = fit_area(t, p);
    OrientationField field = orientation_from_minutiae(t, 8);
    StampResult stamped = stamp_prototypes(t, field, p);
    GrayImage grown = grow_ridges(stamped.image, std::move(stamped.known), field, area, p);
    return add_noise(grown, area, p, seed);
}

GrayImage obliterate(const GrayImage& img, const std::vector<Scar>& scars, Seed seed) {
    GrayImage out = img;
    Rng rng(seed);
    for (const Scar& sc : scars) {
        std::vector<std::pair<int, int>> disk;
        for (int dy = -sc.radius; dy <= sc.radius; ++dy) {
            for (int dx = -sc.radius; dx <= sc.radius; ++dx) {
                if (dx * dx + dy * dy > sc.radius * sc.radius) continue;
                int x = sc.cx + dx, y = sc.cy + dy;
                if (out.contains(x, y)) disk.emplace_back(x, y);
            }
        }
        if (sc.style == ScarStyle::Erase) {
            for (auto [x, y] : disk) out.at(x, y) = 255;
        } else {
            std::vector<uint8_t> vals;
            vals.reserve(disk.size());
            for (auto [x, y] : disk) vals.push_back(out.at(x, y));
            // seeded Fisher-Yates
            for (size_t i = vals.size(); i > 1; --i) {
                size_t j = static_cast<size_t>(rng.uniform_int(0, static_cast<int64_t>(i) - 1));
                std::swap(vals[i - 1], vals[j]);
            }
            for (size_t i = 0; i < disk.size(); ++i) out.at(disk[i].first, disk[i].second) = vals[i];
        }
    }
    return out;
}

}  // namespace biolab::synth
