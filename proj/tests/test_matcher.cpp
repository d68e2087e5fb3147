#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>

#include "biolab/matcher.hpp"

using namespace biolab;
using namespace biolab::match;

namespace {

// Exhaustive assignment oracle: best total pair weight over all one-to-one
// eligible assignments (n <= 6 per side).
double best_assignment_weight(const MinutiaeTemplate& a, const MinutiaeTemplate& b,
                              const MatchParams& p, size_t* best_size = nullptr) {
    size_t na = a.minutiae.size(), nb = b.minutiae.size();
    std::vector<std::vector<double>> w(na, std::vector<double>(nb, -1.0));
    for (size_t i = 0; i < na; ++i) {
        for (size_t j = 0; j < nb; ++j) {
            const Minutia &ma = a.minutiae[i], &mb = b.minutiae[j];
            if (ma.kind != mb.kind) continue;
            double dx = ma.x - mb.x, dy = ma.y - mb.y;
            double d = std::sqrt(dx * dx + dy * dy);
            double dt = ridge_angle_diff(ma.theta, mb.theta);
            if (d > p.dist_tol || dt > p.angle_tol) continue;
            w[i][j] = pair_weight(d, dt, p);
        }
    }
    double best = 0.0;
    size_t best_pairs = 0;
    std::vector<bool> used(nb, false);
    std::function<void(size_t, double, size_t)> rec = [&](size_t i, double acc, size_t pairs) {
        if (i == na) {
            if (acc > best || (acc == best && pairs > best_pairs)) {
                best = acc;
                best_pairs = std::max(best_pairs, pairs);
            }
            return;
        }
        rec(i + 1, acc, pairs);  // leave i unmatched
        for (size_t j = 0; j < nb; ++j) {
            if (used[j] || w[i][j] < 0) continue;
            used[j] = true;
            rec(i + 1, acc + w[i][j], pairs + 1);
            used[j] = false;
        }
    };
    rec(0, 0.0, 0);
    if (best_size) *best_size = best_pairs;
    return best;
}

MinutiaeTemplate frame(int n) {
    MinutiaeTemplate t;
    t.width = 256;
    t.height = 288;
    t.minutiae.reserve(static_cast<size_t>(n));
    return t;
}

}  // namespace

TEST_CASE("identical templates pair one-to-one and score 1") {
    MatchParams p;
    MinutiaeTemplate t = frame(3);
    t.minutiae = {{10, 10, 0.2, MinutiaKind::Termination},
                  {50, 60, 1.0, MinutiaKind::Bifurcation},
                  {120, 200, 4.0, MinutiaKind::Termination}};
    Pairing pr = pair_minutiae(t, t, p);
    REQUIRE(pr.pairs.size() == 3);
    for (auto [i, j] : pr.pairs) CHECK(i == j);
    CHECK(compare_minutiae(t, t, p).value == doctest::Approx(1.0));
}

TEST_CASE("empty probe") {
    MatchParams p;
    MinutiaeTemplate empty = frame(0);
    MinutiaeTemplate t = frame(1);
    t.minutiae = {{10, 10, 0.0, MinutiaKind::Termination}};
    CHECK(pair_minutiae(empty, t, p).pairs.empty());
    CHECK(compare_minutiae(empty, t, p).value == doctest::Approx(0.0));
}

TEST_CASE("singleton offset example: (1-0.5)(1-0.5) = 0.25") {
    MatchParams p;  // dist_tol 12, angle_tol pi/8
    MinutiaeTemplate a = frame(1), b = frame(1);
    a.minutiae = {{100, 100, 0.0, MinutiaKind::Termination}};
    b.minutiae = {{106, 100, kPi / 16, MinutiaKind::Termination}};
    CHECK(compare_minutiae(a, b, p).value == doctest::Approx(0.25));
}

TEST_CASE("clustered instance matches the exhaustive oracle size") {
    MatchParams p;
    MinutiaeTemplate a = frame(4), b = frame(4);
    // tight cluster where greedy choices matter
    a.minutiae = {{100, 100, 0.1, MinutiaKind::Termination},
                  {104, 100, 0.1, MinutiaKind::Termination},
                  {100, 104, 0.1, MinutiaKind::Termination},
                  {104, 104, 0.1, MinutiaKind::Termination}};
    b.minutiae = {{102, 100, 0.1, MinutiaKind::Termination},
                  {106, 100, 0.1, MinutiaKind::Termination},
                  {102, 104, 0.1, MinutiaKind::Termination},
                  {106, 104, 0.1, MinutiaKind::Termination}};
    size_t oracle_size = 0;
    best_assignment_weight(a, b, p, &oracle_size);
    CHECK(pair_minutiae(a, b, p).pairs.size() == oracle_size);
}

TEST_CASE("decide boundary") {
    CHECK(decide(MatchScore{0.7}, 0.7) == Decision::Accept);
    CHECK(decide(MatchScore{0.69}, 0.7) == Decision::Reject);
}

TEST_CASE("properties: symmetry, identity, bounds over 500 random pairs") {
    MatchParams p;
    Rng rng(Seed{31337});
    for (int i = 0; i < 500; ++i) {
        int na = static_cast<int>(rng.uniform_int(0, 25));
        int nb = static_cast<int>(rng.uniform_int(0, 25));
        MinutiaeTemplate a = random_template(rng, na, 128, 128);
        MinutiaeTemplate b = random_template(rng, nb, 128, 128);
        double sab = compare_minutiae(a, b, p).value;
        double sba = compare_minutiae(b, a, p).value;
        CHECK(sab == doctest::Approx(sba));
        CHECK(sab >= 0.0);
        CHECK(sab <= 1.0);
        if (na > 0) CHECK(compare_minutiae(a, a, p).value == doctest::Approx(1.0));
    }
}

TEST_CASE("greedy vs exhaustive oracle on small instances") {
    MatchParams p;
    Rng rng(Seed{77});
    double worst_gap = 0.0;
    for (int i = 0; i < 300; ++i) {
        int na = static_cast<int>(rng.uniform_int(1, 6));
        int nb = static_cast<int>(rng.uniform_int(1, 6));
        // clustered instances so tolerances actually bind
        MinutiaeTemplate a = random_template(rng, na, 40, 40);
        MinutiaeTemplate b = random_template(rng, nb, 40, 40);
        double greedy = compare_minutiae(a, b, p).value;
        double denom = static_cast<double>(std::max({a.minutiae.size(), b.minutiae.size(),
                                                     size_t{1}}));
        double optimal = std::min(1.0, best_assignment_weight(a, b, p) / denom);
        CHECK(greedy <= optimal + 1e-9);
        worst_gap = std::max(worst_gap, optimal - greedy);
    }
    CHECK(worst_gap <= 0.15);  // empirical greedy gap on this seeded corpus
}

TEST_CASE("monotone degradation: removing a paired minutia never raises the score") {
    MatchParams p;
    Rng rng(Seed{11});
    for (int i = 0; i < 100; ++i) {
        MinutiaeTemplate a = random_template(rng, 10, 64, 64);
        MinutiaeTemplate b = a;  // guaranteed pairs
        double before = compare_minutiae(a, b, p).value;
        MinutiaeTemplate reduced = a;
        reduced.minutiae.pop_back();
        double after = compare_minutiae(reduced, b, p).value;
        CHECK(after <= before + 1e-12);
    }
}
