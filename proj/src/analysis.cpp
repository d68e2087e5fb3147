#include "biolab/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace biolab::analysis {

namespace {

// Summed-area table for fast box means.
struct Integral {
    int w, h;
    std::vector<double> sum;  // (w+1)*(h+1)

    explicit Integral(const GrayImage& img) : w(img.width), h(img.height) {
        sum.assign(static_cast<size_t>(w + 1) * (h + 1), 0.0);
        for (int y = 0; y < h; ++y) {
            double row = 0.0;
            for (int x = 0; x < w; ++x) {
                row += img.at(x, y);
                sum[static_cast<size_t>(y + 1) * (w + 1) + (x + 1)] =
                    sum[static_cast<size_t>(y) * (w + 1) + (x + 1)] + row;
            }
        }
    }

    double mean(int x, int y, int radius) const {
        int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
        int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
        double s = sum[static_cast<size_t>(y1 + 1) * (w + 1) + (x1 + 1)] -
                   sum[static_cast<size_t>(y0) * (w + 1) + (x1 + 1)] -
                   sum[static_cast<size_t>(y1 + 1) * (w + 1) + (x0)] +
                   sum[static_cast<size_t>(y0) * (w + 1) + (x0)];
        return s / (static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1));
    }
};

// Foreground = locally non-white area; outside a synthetic print everything
// is pure white, so a 15x15 box mean below 240 marks printed area.
bool is_foreground(const Integral& integ, int x, int y) {
    return integ.mean(x, y, 7) < 240.0;
}

// 8-neighborhood in a fixed cyclic order starting straight up.
constexpr int kNbr[8][2] = {{0, -1}, {1, -1}, {1, 0},  {1, 1},
                            {0, 1},  {-1, 1}, {-1, 0}, {-1, -1}};

int neighbor_bit(const SkeletonImage& s, int x, int y, int k) {
    int nx = x + kNbr[k][0], ny = y + kNbr[k][1];
    if (nx < 0 || nx >= s.width || ny < 0 || ny >= s.height) return 0;
    return s.at(nx, ny) ? 1 : 0;
}

// Circular distance between two full-circle directions.
double dir_diff(double a, double b) {
    double d = std::fabs(wrap_angle_2pi(a) - wrap_angle_2pi(b));
    return std::min(d, kTwoPi - d);
}

// Walk along the skeleton from (x, y) through a given first neighbor for up
// to `steps` pixels; returns the direction from the start to the walk end.
double branch_direction(const SkeletonImage& s, int x, int y, int first, int steps) {
    int px = x, py = y;
    int cx = x + kNbr[first][0], cy = y + kNbr[first][1];
    for (int i = 1; i < steps; ++i) {
        int next_x = -1, next_y = -1;
        for (int k = 0; k < 8; ++k) {
            int nx = cx + kNbr[k][0], ny = cy + kNbr[k][1];
            if (nx < 0 || nx >= s.width || ny < 0 || ny >= s.height) continue;
            if (!s.at(nx, ny)) continue;
            if (nx == px && ny == py) continue;
            if (nx == x && ny == y) continue;
            if (next_x >= 0) { next_x = -2; break; }  // junction, stop here
            next_x = nx;
            next_y = ny;
        }
        if (next_x < 0) break;
        px = cx; py = cy;
        cx = next_x; cy = next_y;
    }
    return std::atan2(static_cast<double>(cy - y), static_cast<double>(cx - x));
}

}  // namespace

OrientationField orientation_from_image(const GrayImage& img, int cell) {
    if (img.width < 3 || img.height < 3) throw ImageTooSmall("orientation needs >= 3x3");
    OrientationField f;
    f.cell = cell;
    f.cols = (img.width + cell - 1) / cell;
    f.rows = (img.height + cell - 1) / cell;
    f.angles.assign(static_cast<size_t>(f.cols) * f.rows, 0.0);
    f.coherence.assign(static_cast<size_t>(f.cols) * f.rows, 0.0);

    for (int cy = 0; cy < f.rows; ++cy) {
        for (int cx = 0; cx < f.cols; ++cx) {
            double a = 0.0, b = 0.0, energy = 0.0;
            int x0 = std::max(1, cx * cell), x1 = std::min(img.width - 2, (cx + 1) * cell - 1);
            int y0 = std::max(1, cy * cell), y1 = std::min(img.height - 2, (cy + 1) * cell - 1);
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    double gx = (img.at(x + 1, y) - img.at(x - 1, y)) / 2.0;
                    double gy = (img.at(x, y + 1) - img.at(x, y - 1)) / 2.0;
                    a += gx * gx - gy * gy;
                    b += 2.0 * gx * gy;
                    energy += gx * gx + gy * gy;
                }
            }
            size_t idx = static_cast<size_t>(cy) * f.cols + cx;
            if (energy <= 0.0) {
                f.angles[idx] = 0.0;
                f.coherence[idx] = 0.0;
            } else {
                f.angles[idx] = wrap_angle_pi(0.5 * std::atan2(b, a) + kPi / 2);
                f.coherence[idx] = std::sqrt(a * a + b * b) / energy;
            }
        }
    }
    return f;
}

SkeletonImage thin(SkeletonImage s) {
    // Zhang-Suen two-subiteration thinning to a fixpoint.
    auto count_neighbors = [&](int x, int y) {
        int n = 0;
        for (int k = 0; k < 8; ++k) n += neighbor_bit(s, x, y, k);
        return n;
    };
    auto transitions = [&](int x, int y) {
        int t = 0;
        for (int k = 0; k < 8; ++k) {
            if (!neighbor_bit(s, x, y, k) && neighbor_bit(s, x, y, (k + 1) % 8)) ++t;
        }
        return t;
    };

    bool changed = true;
    std::vector<std::pair<int, int>> kill;
    while (changed) {
        changed = false;
        for (int sub = 0; sub < 2; ++sub) {
            kill.clear();
            for (int y = 0; y < s.height; ++y) {
                for (int x = 0; x < s.width; ++x) {
                    if (!s.at(x, y)) continue;
                    int bcount = count_neighbors(x, y);
                    if (bcount < 2 || bcount > 6) continue;
                    if (transitions(x, y) != 1) continue;
                    int p2 = neighbor_bit(s, x, y, 0);  // up
                    int p4 = neighbor_bit(s, x, y, 2);  // right
                    int p6 = neighbor_bit(s, x, y, 4);  // down
                    int p8 = neighbor_bit(s, x, y, 6);  // left
                    bool cond = sub == 0 ? (p2 * p4 * p6 == 0 && p4 * p6 * p8 == 0)
                                         : (p2 * p4 * p8 == 0 && p2 * p6 * p8 == 0);
                    if (cond) kill.emplace_back(x, y);
                }
            }
            for (auto [x, y] : kill) s.at(x, y) = 0;
            if (!kill.empty()) changed = true;
        }
    }
    return s;
}

SkeletonImage binarize_and_thin(const GrayImage& img) {
    if (img.width < 3 || img.height < 3) throw ImageTooSmall("binarize needs >= 3x3");
    Integral integ(img);
    SkeletonImage s;
    s.width = img.width;
    s.height = img.height;
    s.bits.assign(static_cast<size_t>(img.width) * img.height, 0);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (img.at(x, y) < integ.mean(x, y, 7) - 2.0) s.at(x, y) = 1;
        }
    }
    return thin(std::move(s));
}

int crossing_number(const SkeletonImage& s, int x, int y) {
    int acc = 0;
    for (int k = 0; k < 8; ++k) {
        acc += std::abs(neighbor_bit(s, x, y, (k + 1) % 8) - neighbor_bit(s, x, y, k));
    }
    return acc / 2;
}

namespace {

// Binary closing with a small disk: bridges gaps where noise dots cut a ridge.
SkeletonImage close_map(const SkeletonImage& in, int radius) {
    auto pass = [&](const SkeletonImage& src, int keep) {
        SkeletonImage dst = src;
        for (int y = 0; y < src.height; ++y) {
            for (int x = 0; x < src.width; ++x) {
                int hit = 0;
                for (int dy = -radius; dy <= radius && !hit; ++dy) {
                    for (int dx = -radius; dx <= radius; ++dx) {
                        if (dx * dx + dy * dy > radius * radius) continue;
                        int nx = x + dx, ny = y + dy;
                        if (nx < 0 || nx >= src.width || ny < 0 || ny >= src.height) continue;
                        if (src.at(nx, ny) == keep) { hit = 1; break; }
                    }
                }
                dst.at(x, y) = keep ? (hit ? 1 : 0) : (hit ? 0 : 1);
            }
        }
        return dst;
    };
    return pass(pass(in, 1), 0);  // dilate then erode
}

// Remove skeleton branches shorter than max_len hanging off a junction
// (classic spur suppression; thinning leaves whiskers at ridge junctions).
void prune_spurs(SkeletonImage& s, int max_len) {
    for (int round = 0; round < 2; ++round) {
        std::vector<std::pair<int, int>> erase;
        for (int y = 1; y < s.height - 1; ++y) {
            for (int x = 1; x < s.width - 1; ++x) {
                if (!s.at(x, y) || crossing_number(s, x, y) != 1) continue;
                // walk from the endpoint; if a junction appears within
                // max_len steps the walked pixels form a spur
                std::vector<std::pair<int, int>> path{{x, y}};
                int px = -1, py = -1, cx = x, cy = y;
                bool spur = false;
                for (int i = 0; i < max_len; ++i) {
                    int nx = -1, ny = -1, nbrs = 0;
                    for (int k = 0; k < 8; ++k) {
                        int tx = cx + kNbr[k][0], ty = cy + kNbr[k][1];
                        if (tx < 0 || tx >= s.width || ty < 0 || ty >= s.height) continue;
                        if (!s.at(tx, ty) || (tx == px && ty == py)) continue;
                        ++nbrs;
                        nx = tx;
                        ny = ty;
                    }
                    if (nbrs != 1) {
                        spur = nbrs > 1;  // reached a junction
                        break;
                    }
                    px = cx; py = cy;
                    cx = nx; cy = ny;
                    if (crossing_number(s, cx, cy) >= 3) { spur = true; break; }
                    path.emplace_back(cx, cy);
                }
                if (spur) erase.insert(erase.end(), path.begin(), path.end());
            }
        }
        if (erase.empty()) break;
        for (auto [ex, ey] : erase) s.at(ex, ey) = 0;
    }
}

}  // namespace

MinutiaeTemplate extract_minutiae(const GrayImage& img, const ExtractParams& p) {
    if (img.width < 32 || img.height < 32) throw ImageTooSmall("extract needs >= 32x32");
    Integral binteg(img);
    SkeletonImage ridge_map;
    ridge_map.width = img.width;
    ridge_map.height = img.height;
    ridge_map.bits.assign(static_cast<size_t>(img.width) * img.height, 0);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (img.at(x, y) < binteg.mean(x, y, 7) - 2.0) ridge_map.at(x, y) = 1;
        }
    }
    SkeletonImage skel = thin(std::move(ridge_map));
    prune_spurs(skel, 5);
    skel = thin(std::move(skel));
    OrientationField field = orientation_from_image(img, p.cell);
    Integral integ(img);

    auto interior = [&](int x, int y) {
        int r = p.border_margin;
        for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
                if (dx * dx + dy * dy > r * r) continue;
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || nx >= img.width || ny < 0 || ny >= img.height) return false;
                if (!is_foreground(integ, nx, ny)) return false;
            }
        }
        return true;
    };

    MinutiaeTemplate t;
    t.width = img.width;
    t.height = img.height;
    t.resolution = p.resolution;

    std::vector<Minutia> found;
    for (int y = 1; y < img.height - 1; ++y) {
        for (int x = 1; x < img.width - 1; ++x) {
            if (!skel.at(x, y)) continue;
            int cn = crossing_number(skel, x, y);
            if (cn != 1 && cn != 3) continue;
            if (!interior(x, y)) continue;

            std::vector<double> branches;
            for (int k = 0; k < 8; ++k) {
                if (neighbor_bit(skel, x, y, k)) {
                    branches.push_back(branch_direction(skel, x, y, k, 6));
                }
            }
            double ref_dir;
            MinutiaKind kind;
            if (cn == 1) {
                kind = MinutiaKind::Termination;
                if (branches.empty()) continue;
                ref_dir = branches[0];  // direction along the outgoing ridge
            } else {
                kind = MinutiaKind::Bifurcation;
                if (branches.size() < 3) continue;
                // the two fork branches have the smallest angular gap; the
                // minutia points along their bisector
                size_t bi = 0, bj = 1;
                double best = 1e9;
                for (size_t i = 0; i < branches.size(); ++i) {
                    for (size_t j = i + 1; j < branches.size(); ++j) {
                        double d = dir_diff(branches[i], branches[j]);
                        if (d < best) { best = d; bi = i; bj = j; }
                    }
                }
                double ax = std::cos(branches[bi]) + std::cos(branches[bj]);
                double ay = std::sin(branches[bi]) + std::sin(branches[bj]);
                ref_dir = std::atan2(ay, ax);
            }
            // field gives the pi-periodic ridge angle; the branch direction
            // picks which of the two full-circle candidates applies
            double phi = field.angle_at_pixel(x, y);
            double cand1 = phi, cand2 = phi + kPi;
            double theta = dir_diff(cand1, ref_dir) <= dir_diff(cand2, ref_dir) ? cand1 : cand2;

            Minutia m;
            m.x = x;
            m.y = y;
            m.theta = wrap_angle_2pi(theta);
            m.kind = kind;
            found.push_back(m);
        }
    }

    // broken-ridge suppression: a pair of terminations facing each other at
    // under a ridge period is a cut ridge, not two real endings — drop both
    std::vector<char> drop(found.size(), 0);
    for (size_t i = 0; i < found.size(); ++i) {
        if (found[i].kind != MinutiaKind::Termination) continue;
        for (size_t j = i + 1; j < found.size(); ++j) {
            if (found[j].kind != MinutiaKind::Termination) continue;
            double dx = found[j].x - found[i].x, dy = found[j].y - found[i].y;
            if (dx * dx + dy * dy > 144.0) continue;
            double ij = std::atan2(dy, dx);
            if (dir_diff(found[i].theta, ij + kPi) < kPi / 3 &&
                dir_diff(found[j].theta, ij) < kPi / 3) {
                drop[i] = drop[j] = 1;
            }
        }
    }
    {
        std::vector<Minutia> kept;
        for (size_t i = 0; i < found.size(); ++i) {
            if (!drop[i]) kept.push_back(found[i]);
        }
        found.swap(kept);
    }

    // merge near-duplicates, keeping the first in scan order
    for (const Minutia& m : found) {
        bool dup = false;
        for (const Minutia& kept : t.minutiae) {
            double dx = m.x - kept.x, dy = m.y - kept.y;
            if (dx * dx + dy * dy < p.merge_dist * p.merge_dist) { dup = true; break; }
        }
        if (!dup) t.minutiae.push_back(m);
    }
    return t;
}

// Calibrated as the 95th percentile of scores over clean synthetic prints,
// seeds 0..49 (n = 25 minutiae, 256x288, default synthesis parameters).
const double kAlterationThreshold = 0.088578;

AlterationResult alteration_score(const GrayImage& img) {
    if (img.width < 64 || img.height < 64) throw ImageTooSmall("alteration needs >= 64x64");
    OrientationField f = orientation_from_image(img, 8);

    double lap_sum = 0.0;
    int lap_count = 0;
    for (int cy = 1; cy < f.rows - 1; ++cy) {
        for (int cx = 1; cx < f.cols - 1; ++cx) {
            auto u = [&](int ax, int ay) { return std::cos(2.0 * f.angle_at(ax, ay)); };
            auto v = [&](int ax, int ay) { return std::sin(2.0 * f.angle_at(ax, ay)); };
            double lu = u(cx + 1, cy) + u(cx - 1, cy) + u(cx, cy + 1) + u(cx, cy - 1) -
                        4.0 * u(cx, cy);
            double lv = v(cx + 1, cy) + v(cx - 1, cy) + v(cx, cy + 1) + v(cx, cy - 1) -
                        4.0 * v(cx, cy);
            lap_sum += f.coh_at(cx, cy) * std::sqrt(lu * lu + lv * lv);
            ++lap_count;
        }
    }
    double lap_term = lap_count > 0 ? lap_sum / lap_count : 0.0;

    // minutiae-density outliers over 32x32 blocks
    MinutiaeTemplate t = extract_minutiae(img);
    int bw = (img.width + 31) / 32, bh = (img.height + 31) / 32;
    std::vector<int> counts(static_cast<size_t>(bw) * bh, 0);
    for (const Minutia& m : t.minutiae) {
        counts[static_cast<size_t>(m.y / 32) * bw + m.x / 32]++;
    }
    std::vector<int> nonzero;
    for (int c : counts) {
        if (c > 0) nonzero.push_back(c);
    }
    double density_term = 0.0;
    if (!nonzero.empty()) {
        std::sort(nonzero.begin(), nonzero.end());
        double median = nonzero[nonzero.size() / 2];
        double cutoff = std::max(3.0 * median, 3.0);
        int outliers = 0;
        for (int c : nonzero) {
            if (c > cutoff) ++outliers;
        }
        density_term = static_cast<double>(outliers) / static_cast<double>(nonzero.size());
    }

    AlterationResult r;
    r.score = lap_term + density_term;
    r.altered = r.score > kAlterationThreshold;
    return r;
}

}  // namespace biolab::analysis
