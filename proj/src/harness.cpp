#include "biolab/harness.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace biolab::harness {

void export_trace_csv(const attack::AttackTrace& trace, const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw StorageFailure("cannot open for write: " + path.string());
    f << "call,score,best,accepted\n";
    char buf[64];
    for (const attack::TraceEntry& e : trace.entries) {
        f << e.call << ',';
        if (e.observed) {
            std::snprintf(buf, sizeof(buf), "%.6f", *e.observed);
            f << buf;
        }
        std::snprintf(buf, sizeof(buf), "%.6f", e.best);
        f << ',' << buf << ',' << (e.accepted ? 1 : 0) << '\n';
    }
    if (!f) throw StorageFailure("write failed: " + path.string());
}

void export_defense_csv(const defense::DefenseReport& report,
                        const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw StorageFailure("cannot open for write: " + path.string());
    f << "attack,policy,trials,successes,median_calls\n";
    for (const defense::DefenseCell& c : report.cells) {
        f << c.attack << ',' << c.policy << ',' << c.trials << ',' << c.successes << ','
          << c.median_calls << '\n';
    }
    if (!f) throw StorageFailure("write failed: " + path.string());
}

namespace {

double parse_num(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad value for " + key + ": " + value);
    }
}

void require(bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ConfigError("out-of-range value for " + key + " (" + why + ")");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // trim
        auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        auto e = line.find_last_not_of(" \t\r");
        line = line.substr(b, e - b + 1);
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        }
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        auto vb = value.find_first_not_of(" \t");
        value = vb == std::string::npos ? "" : value.substr(vb);

        if (key == "seed") {
            double v = parse_num(key, value);
            require(v >= 0, key, "seed >= 0");
            cfg.seed = static_cast<uint64_t>(v);
        } else if (key == "matcher.dist_tol") {
            cfg.matcher.dist_tol = parse_num(key, value);
            require(cfg.matcher.dist_tol > 0, key, "dist_tol > 0");
        } else if (key == "matcher.angle_tol") {
            cfg.matcher.angle_tol = parse_num(key, value);
            require(cfg.matcher.angle_tol > 0 && cfg.matcher.angle_tol <= kPi / 2, key,
                    "0 < angle_tol <= pi/2");
        } else if (key == "matcher.tau") {
            cfg.matcher.tau = parse_num(key, value);
            require(cfg.matcher.tau >= 0 && cfg.matcher.tau <= 1, key, "0 <= tau <= 1");
        } else if (key == "synthesis.ridge_period") {
            cfg.synthesis.ridge_period = static_cast<int>(parse_num(key, value));
            require(cfg.synthesis.ridge_period >= 4, key, "ridge_period >= 4");
        } else if (key == "synthesis.prototype_size") {
            cfg.synthesis.prototype_size = static_cast<int>(parse_num(key, value));
            require(cfg.synthesis.prototype_size >= 9 && cfg.synthesis.prototype_size % 2 == 1,
                    key, "prototype_size odd and >= 9");
        } else if (key == "synthesis.growth_iters_max") {
            cfg.synthesis.growth_iters_max = static_cast<int>(parse_num(key, value));
            require(cfg.synthesis.growth_iters_max >= 0, key, ">= 0");
        } else if (key == "synthesis.noise_dots") {
            cfg.synthesis.noise_dots = static_cast<int>(parse_num(key, value));
            require(cfg.synthesis.noise_dots >= 0, key, ">= 0");
        } else if (key == "synthesis.smoothing") {
            cfg.synthesis.smoothing = static_cast<int>(parse_num(key, value));
            require(cfg.synthesis.smoothing >= 0, key, ">= 0");
        } else if (key == "synthesis.margin") {
            cfg.synthesis.margin = static_cast<int>(parse_num(key, value));
            require(cfg.synthesis.margin >= 1, key, ">= 1");
        } else if (key == "attack.fp.population") {
            cfg.fp_attack.population = static_cast<int>(parse_num(key, value));
            require(cfg.fp_attack.population >= 1, key, "P >= 1");
        } else if (key == "attack.fp.budget") {
            double v = parse_num(key, value);
            require(v >= 0, key, ">= 0");
            cfg.fp_attack.max_oracle_calls = static_cast<uint64_t>(v);
        } else if (key == "attack.fp.perturb_radius") {
            cfg.fp_attack.perturb_radius = parse_num(key, value);
            require(cfg.fp_attack.perturb_radius >= 0, key, ">= 0");
        } else if (key == "attack.fp.perturb_angle") {
            cfg.fp_attack.perturb_angle = parse_num(key, value);
            require(cfg.fp_attack.perturb_angle >= 0, key, ">= 0");
        } else if (key == "attack.fp.w_perturb" || key == "attack.fp.w_add" ||
                   key == "attack.fp.w_delete") {
            double v = parse_num(key, value);
            require(v > 0, key, "move weights positive");
            if (key == "attack.fp.w_perturb") cfg.fp_attack.w_perturb = v;
            if (key == "attack.fp.w_add") cfg.fp_attack.w_add = v;
            if (key == "attack.fp.w_delete") cfg.fp_attack.w_delete = v;
        } else if (key == "attack.face.i_max") {
            cfg.face_attack.i_max = static_cast<int>(parse_num(key, value));
            require(cfg.face_attack.i_max >= 0, key, ">= 0");
        } else if (key == "attack.face.stall_limit") {
            cfg.face_attack.stall_limit = static_cast<int>(parse_num(key, value));
            require(cfg.face_attack.stall_limit >= 1, key, ">= 1");
        } else if (key == "trials") {
            cfg.trials = static_cast<int>(parse_num(key, value));
            require(cfg.trials >= 1, key, ">= 1");
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else {
            throw ConfigError("unknown key: " + key);
        }
    }
    double wsum = cfg.fp_attack.w_perturb + cfg.fp_attack.w_add + cfg.fp_attack.w_delete;
    require(std::fabs(wsum - 1.0) < 1e-9, "attack.fp.w_*", "weights must sum to 1");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config: " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

}  // namespace biolab::harness
