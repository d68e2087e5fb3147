#include "biolab/pgm.hpp"

#include <fstream>
#include <string>

namespace biolab::pgm {

void write_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw PgmError("cannot open for write: " + path.string());
    f << "P5\n" << img.width << " " << img.height << "\n255\n";
    f.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (!f) throw PgmError("write failed: " + path.string());
}

namespace {

int read_pgm_int(std::istream& in) {
    // skip whitespace and '#' comments
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int v;
    if (!(in >> v)) throw PgmError("malformed PGM header");
    return v;
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw PgmError("cannot open: " + path.string());
    char m0 = 0, m1 = 0;
    f.get(m0);
    f.get(m1);
    if (m0 != 'P' || m1 != '5') throw PgmError("not a binary P5 PGM: " + path.string());
    int w = read_pgm_int(f);
    int h = read_pgm_int(f);
    int maxval = read_pgm_int(f);
    if (w <= 0 || h <= 0 || maxval != 255) throw PgmError("unsupported PGM: " + path.string());
    f.get();  // single whitespace after maxval
    GrayImage img(w, h);
    f.read(reinterpret_cast<char*>(img.pixels.data()),
           static_cast<std::streamsize>(img.pixels.size()));
    if (f.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw PgmError("truncated PGM: " + path.string());
    }
    return img;
}

}  // namespace biolab::pgm
