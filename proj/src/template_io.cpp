#include "biolab/template_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace biolab::io {

namespace {

constexpr uint8_t kMagic[4] = {'B', 'T', 'M', '1'};
constexpr size_t kHeaderSize = 12;
constexpr size_t kMinutiaSize = 6;

void put_u16(std::vector<uint8_t>& out, unsigned v) {
    out.push_back(static_cast<uint8_t>((v >> 8) & 0xFF));
    out.push_back(static_cast<uint8_t>(v & 0xFF));
}

unsigned get_u16(const std::vector<uint8_t>& in, size_t off) {
    return (static_cast<unsigned>(in[off]) << 8) | in[off + 1];
}

void check_u16(long v, const char* field) {
    if (v < 0 || v > 0xFFFF) throw OutOfRange(std::string(field) + " exceeds u16 range");
}

}  // namespace

uint8_t quantize_theta(double theta) {
    double step = kTwoPi / 256.0;
    long q = static_cast<long>(std::floor(theta / step + 0.5));
    return static_cast<uint8_t>(q & 0xFF);  // wrap 256 -> 0
}

std::vector<uint8_t> serialize_template(const MinutiaeTemplate& t) {
    check_u16(t.width, "width");
    check_u16(t.height, "height");
    check_u16(t.resolution, "resolution");
    check_u16(static_cast<long>(t.minutiae.size()), "minutiae count");

    std::vector<uint8_t> out;
    out.reserve(kHeaderSize + kMinutiaSize * t.minutiae.size());
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, static_cast<unsigned>(t.width));
    put_u16(out, static_cast<unsigned>(t.height));
    put_u16(out, static_cast<unsigned>(t.resolution));
    put_u16(out, static_cast<unsigned>(t.minutiae.size()));
    for (const Minutia& m : t.minutiae) {
        check_u16(m.x, "minutia x");
        check_u16(m.y, "minutia y");
        out.push_back(static_cast<uint8_t>(m.kind));
        put_u16(out, static_cast<unsigned>(m.x));
        put_u16(out, static_cast<unsigned>(m.y));
        out.push_back(quantize_theta(m.theta));
    }
    return out;
}

MinutiaeTemplate parse_template(const std::vector<uint8_t>& bytes) {
    if (bytes.size() < kHeaderSize) throw Truncated(bytes.size());
    for (size_t i = 0; i < 4; ++i) {
        if (bytes[i] != kMagic[i]) throw BadMagic(i);
    }
    MinutiaeTemplate t;
    t.width = static_cast<int>(get_u16(bytes, 4));
    t.height = static_cast<int>(get_u16(bytes, 6));
    t.resolution = static_cast<int>(get_u16(bytes, 8));
    size_t n = get_u16(bytes, 10);
    size_t expected = kHeaderSize + kMinutiaSize * n;
    if (bytes.size() != expected) {
        throw Truncated(std::min(bytes.size(), expected));
    }
    t.minutiae.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        size_t off = kHeaderSize + kMinutiaSize * i;
        Minutia m;
        uint8_t kind = bytes[off];
        if (kind > 1) throw ParseError("unknown minutia kind", off);
        m.kind = static_cast<MinutiaKind>(kind);
        m.x = static_cast<int>(get_u16(bytes, off + 1));
        m.y = static_cast<int>(get_u16(bytes, off + 3));
        m.theta = bytes[off + 5] * (kTwoPi / 256.0);
        if (!t.in_bounds(m)) throw BoundsViolation(off);
        t.minutiae.push_back(m);
    }
    return t;
}

bool valid_user_id(const std::string& user) {
    if (user.empty() || user.size() > 64) return false;
    for (char c : user) {
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '-';
        if (!ok) return false;
    }
    return true;
}

TemplateStore::TemplateStore(std::filesystem::path root) : root_(std::move(root)) {
    std::error_code ec;
    std::filesystem::create_directories(root_, ec);
    if (ec) throw StorageFailure("cannot create store directory: " + root_.string());
}

std::filesystem::path TemplateStore::path_for(const std::string& user) const {
    return root_ / (user + ".btm");
}

void TemplateStore::enroll(const std::string& user, const MinutiaeTemplate& t) {
    if (!valid_user_id(user)) throw InvalidUserId(user);
    auto bytes = serialize_template(t);
    auto tmp = root_ / (user + ".btm.tmp");
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw StorageFailure("cannot open " + tmp.string());
        f.write(reinterpret_cast<const char*>(bytes.data()),
                static_cast<std::streamsize>(bytes.size()));
        if (!f) throw StorageFailure("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path_for(user), ec);
    if (ec) throw StorageFailure("rename failed: " + path_for(user).string());
}

MinutiaeTemplate TemplateStore::lookup(const std::string& user) const {
    if (!valid_user_id(user)) throw InvalidUserId(user);
    auto p = path_for(user);
    std::ifstream f(p, std::ios::binary);
    if (!f) throw UnknownUser(user);
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    return parse_template(bytes);
}

std::vector<std::string> TemplateStore::users() const {
    std::vector<std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(root_)) {
        auto p = e.path();
        if (p.extension() == ".btm") out.push_back(p.stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace biolab::io
