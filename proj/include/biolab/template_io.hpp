#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "biolab/core.hpp"

namespace biolab::io {

// Binary minutiae-template format, all integers big-endian:
//   magic "BTM1", width u16, height u16, resolution u16, count u16,
//   then per minutia: kind u8, x u16, y u16, theta u8 (2pi/256 steps).
// Total length = 12 + 6n bytes.

struct OutOfRange : std::runtime_error {
    explicit OutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(const std::string& what, size_t off)
        : std::runtime_error(what + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

struct BadMagic : ParseError {
    explicit BadMagic(size_t off) : ParseError("bad magic", off) {}
};

struct Truncated : ParseError {
    explicit Truncated(size_t off) : ParseError("truncated template", off) {}
};

struct BoundsViolation : ParseError {
    explicit BoundsViolation(size_t off) : ParseError("minutia out of image bounds", off) {}
};

std::vector<uint8_t> serialize_template(const MinutiaeTemplate& t);
MinutiaeTemplate parse_template(const std::vector<uint8_t>& bytes);

// Quantize theta to the on-disk byte: 256 steps of 2pi/256, round half-up, wrap 256 -> 0.
uint8_t quantize_theta(double theta);

struct StorageFailure : std::runtime_error {
    explicit StorageFailure(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownUser : std::runtime_error {
    explicit UnknownUser(const std::string& user) : std::runtime_error("unknown user: " + user) {}
};

struct InvalidUserId : std::runtime_error {
    explicit InvalidUserId(const std::string& user) : std::runtime_error("invalid user id: " + user) {}
};

bool valid_user_id(const std::string& user);

// Flat directory of <user_id>.btm files. Enroll writes atomically
// (temp file + rename) and overwrites existing entries.
class TemplateStore {
public:
    explicit TemplateStore(std::filesystem::path root);

    void enroll(const std::string& user, const MinutiaeTemplate& t);
    MinutiaeTemplate lookup(const std::string& user) const;
    std::vector<std::string> users() const;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
    std::filesystem::path path_for(const std::string& user) const;
};

}  // namespace biolab::io
