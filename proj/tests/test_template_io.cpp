#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "biolab/template_io.hpp"

using namespace biolab;
using namespace biolab::io;

namespace {

MinutiaeTemplate base_template() {
    MinutiaeTemplate t;
    t.width = 256;
    t.height = 288;
    t.resolution = 500;
    return t;
}

}  // namespace

TEST_CASE("empty template serializes to the documented 12 bytes") {
    MinutiaeTemplate t = base_template();
    auto bytes = serialize_template(t);
    std::vector<uint8_t> expected = {0x42, 0x54, 0x4D, 0x31, 0x01, 0x00,
                                     0x01, 0x20, 0x01, 0xF4, 0x00, 0x00};
    CHECK(bytes == expected);
}

TEST_CASE("single termination record layout") {
    MinutiaeTemplate t = base_template();
    t.minutiae.push_back({10, 20, 0.0, MinutiaKind::Termination});
    auto bytes = serialize_template(t);
    REQUIRE(bytes.size() == 18);
    CHECK(bytes[11] == 0x01);  // count
    std::vector<uint8_t> tail(bytes.begin() + 12, bytes.end());
    CHECK(tail == std::vector<uint8_t>{0x00, 0x00, 0x0A, 0x00, 0x14, 0x00});
}

TEST_CASE("theta quantization") {
    CHECK(quantize_theta(kPi) == 128);
    CHECK(quantize_theta(0.0) == 0);
    CHECK(quantize_theta(kTwoPi - 1e-9) == 0);  // wrap 256 -> 0
}

TEST_CASE("parse rejects malformed input") {
    MinutiaeTemplate t = base_template();
    t.minutiae.push_back({10, 20, 1.0, MinutiaKind::Bifurcation});
    auto bytes = serialize_template(t);

    SUBCASE("short header") {
        std::vector<uint8_t> eleven(bytes.begin(), bytes.begin() + 11);
        CHECK_THROWS_AS(parse_template(eleven), Truncated);
    }
    SUBCASE("bad magic") {
        auto bad = bytes;
        bad[0] = 'X';
        CHECK_THROWS_AS(parse_template(bad), BadMagic);
    }
    SUBCASE("count mismatch") {
        auto bad = bytes;
        bad[11] = 2;  // declares 2 minutiae, only 6 trailing bytes
        CHECK_THROWS_AS(parse_template(bad), Truncated);
    }
    SUBCASE("out-of-bounds minutia") {
        auto bad = bytes;
        bad[13] = 0x01;  // x = 266 >= width 256
        bad[14] = 0x0A;
        CHECK_THROWS_AS(parse_template(bad), BoundsViolation);
    }
}

TEST_CASE("fuzz: 1000 random templates round-trip byte-exactly") {
    Rng rng(Seed{2024});
    for (int i = 0; i < 1000; ++i) {
        int n = static_cast<int>(rng.uniform_int(0, 200));
        MinutiaeTemplate t = random_template(rng, n, 256, 288);
        auto bytes = serialize_template(t);
        CHECK(bytes.size() == 12 + 6 * static_cast<size_t>(n));
        MinutiaeTemplate parsed = parse_template(bytes);
        auto bytes2 = serialize_template(parsed);
        REQUIRE(bytes == bytes2);
        // theta quantization error bound
        for (size_t j = 0; j < t.minutiae.size(); ++j) {
            double err = std::fabs(
                std::remainder(parsed.minutiae[j].theta - t.minutiae[j].theta, kTwoPi));
            CHECK(err <= kPi / 256 + 1e-12);
        }
    }
}

TEST_CASE("template store") {
    auto dir = std::filesystem::temp_directory_path() / "biolab_store_test";
    std::filesystem::remove_all(dir);
    TemplateStore store(dir);

    Rng rng(Seed{5});
    MinutiaeTemplate t = random_template(rng, 20, 256, 288);

    SUBCASE("enroll then lookup round-trips") {
        store.enroll("alice", t);
        MinutiaeTemplate got = store.lookup("alice");
        CHECK(serialize_template(got) == serialize_template(t));
    }
    SUBCASE("invalid user ids are rejected") {
        CHECK_THROWS_AS(store.enroll("a/b", t), InvalidUserId);
        CHECK_THROWS_AS(store.enroll("", t), InvalidUserId);
        CHECK_THROWS_AS(store.enroll(std::string(65, 'a'), t), InvalidUserId);
    }
    SUBCASE("missing user") {
        CHECK_THROWS_AS(store.lookup("nobody"), UnknownUser);
    }
    SUBCASE("double enroll keeps one file") {
        store.enroll("bob", t);
        store.enroll("bob", t);
        int count = 0;
        for (const auto& e : std::filesystem::directory_iterator(dir)) {
            (void)e;
            ++count;
        }
        CHECK(count == 1);
    }
    SUBCASE("corrupted magic propagates BadMagic") {
        store.enroll("carol", t);
        auto p = dir / "carol.btm";
        std::fstream f(p, std::ios::in | std::ios::out | std::ios::binary);
        f.put('Z');
        f.close();
        CHECK_THROWS_AS(store.lookup("carol"), BadMagic);
    }
    std::filesystem::remove_all(dir);
}
