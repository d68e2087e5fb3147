#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "biolab/core.hpp"

using namespace biolab;

TEST_CASE("ridge_angle_diff basics") {
    CHECK(ridge_angle_diff(0.3, 0.3) == doctest::Approx(0.0));
    CHECK(ridge_angle_diff(0.0, kPi) == doctest::Approx(0.0));
    // independent oracle: enumerate k in -2..2 and fold by hand
    double a = 0.1, b = kPi / 2 + 0.1;
    double expected = 1e9;
    for (int k = -2; k <= 2; ++k) {
        expected = std::min(expected, std::fabs(a - b + k * kPi));
    }
    CHECK(expected == doctest::Approx(kPi / 2));
    CHECK(ridge_angle_diff(a, b) == doctest::Approx(expected));
}

TEST_CASE("ridge_angle_diff properties") {
    Rng rng(Seed{99});
    for (int i = 0; i < 1000; ++i) {
        double a = rng.uniform(-10.0, 10.0);
        double b = rng.uniform(-10.0, 10.0);
        double d = ridge_angle_diff(a, b);
        CHECK(d >= 0.0);
        CHECK(d <= kPi / 2 + 1e-12);
        CHECK(d == doctest::Approx(ridge_angle_diff(b, a)));
        CHECK(ridge_angle_diff(a, a + kPi) == doctest::Approx(0.0).epsilon(1e-9));
    }
}

TEST_CASE("clamp_pixel") {
    CHECK(clamp_pixel(300.0) == 255);
    CHECK(clamp_pixel(-4.2) == 0);
    CHECK(clamp_pixel(127.5) == 128);  // half-up
    for (int v = 0; v <= 255; ++v) {
        CHECK(clamp_pixel(static_cast<double>(v)) == v);  // idempotent on range
    }
}

TEST_CASE("decide threshold is inclusive") {
    CHECK(decide(MatchScore{0.7}, 0.7) == Decision::Accept);
    CHECK(decide(MatchScore{0.69}, 0.7) == Decision::Reject);
    CHECK(decide(MatchScore{1.0}, 0.0) == Decision::Accept);
}

TEST_CASE("rng determinism") {
    Rng a(Seed{42}), b(Seed{42});
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    Rng c(Seed{43});
    CHECK(Rng(Seed{42}).next_u64() != c.next_u64());
}

TEST_CASE("random_template respects bounds") {
    Rng rng(Seed{7});
    MinutiaeTemplate t = random_template(rng, 50, 100, 120);
    CHECK(t.minutiae.size() == 50);
    for (const Minutia& m : t.minutiae) {
        CHECK(t.in_bounds(m));
        CHECK(m.theta >= 0.0);
        CHECK(m.theta < kTwoPi);
    }
}
