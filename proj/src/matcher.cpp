#include "biolab/matcher.hpp"

#include <algorithm>
#include <cmath>

namespace biolab::match {

namespace {

struct Candidate {
    double dist;
    double dtheta;
    size_t i;
    size_t j;
};

std::vector<Candidate> enumerate_candidates(const MinutiaeTemplate& a,
                                            const MinutiaeTemplate& b,
                                            const MatchParams& p) {
    std::vector<Candidate> out;
    for (size_t i = 0; i < a.minutiae.size(); ++i) {
        const Minutia& ma = a.minutiae[i];
        for (size_t j = 0; j < b.minutiae.size(); ++j) {
            const Minutia& mb = b.minutiae[j];
            if (ma.kind != mb.kind) continue;
            double dx = ma.x - mb.x;
            double dy = ma.y - mb.y;
            double d = std::sqrt(dx * dx + dy * dy);
            if (d > p.dist_tol) continue;
            double dt = ridge_angle_diff(ma.theta, mb.theta);
            if (dt > p.angle_tol) continue;
            out.push_back({d, dt, i, j});
        }
    }
    return out;
}

}  // namespace

Pairing pair_minutiae(const MinutiaeTemplate& a, const MinutiaeTemplate& b,
                      const MatchParams& p) {
    auto cands = enumerate_candidates(a, b, p);
    std::sort(cands.begin(), cands.end(), [](const Candidate& l, const Candidate& r) {
        if (l.dist != r.dist) return l.dist < r.dist;
        if (l.dtheta != r.dtheta) return l.dtheta < r.dtheta;
        if (l.i != r.i) return l.i < r.i;
        return l.j < r.j;
    });

    Pairing result;
    result.candidate_count = cands.size();
    std::vector<bool> used_a(a.minutiae.size(), false);
    std::vector<bool> used_b(b.minutiae.size(), false);
    for (const Candidate& c : cands) {
        if (used_a[c.i] || used_b[c.j]) continue;
        used_a[c.i] = true;
        used_b[c.j] = true;
        result.pairs.emplace_back(c.i, c.j);
    }
    return result;
}

double pair_weight(double dist, double angle_diff, const MatchParams& p) {
    return (1.0 - dist / p.dist_tol) * (1.0 - angle_diff / p.angle_tol);
}

MatchScore compare_minutiae(const MinutiaeTemplate& a, const MinutiaeTemplate& b,
                            const MatchParams& p) {
    Pairing pr = pair_minutiae(a, b, p);
    double total = 0.0;
    for (auto [i, j] : pr.pairs) {
        const Minutia& ma = a.minutiae[i];
        const Minutia& mb = b.minutiae[j];
        double dx = ma.x - mb.x;
        double dy = ma.y - mb.y;
        double d = std::sqrt(dx * dx + dy * dy);
        double dt = ridge_angle_diff(ma.theta, mb.theta);
        total += pair_weight(d, dt, p);
    }
    size_t denom = std::max({a.minutiae.size(), b.minutiae.size(), size_t{1}});
    double score = total / static_cast<double>(denom);
    if (score < 0) score = 0;
    if (score > 1) score = 1;
    return MatchScore{score};
}

}  // namespace biolab::match
