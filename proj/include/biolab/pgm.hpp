#pragma once

#include <filesystem>
#include <stdexcept>

#include "biolab/core.hpp"

namespace biolab::pgm {

struct PgmError : std::runtime_error {
    explicit PgmError(const std::string& what) : std::runtime_error(what) {}
};

// Binary P5, maxval 255.
void write_pgm(const GrayImage& img, const std::filesystem::path& path);
GrayImage read_pgm(const std::filesystem::path& path);

}  // namespace biolab::pgm
