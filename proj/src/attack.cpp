#include "biolab/attack.hpp"

#include <algorithm>
#include <cmath>

namespace biolab::attack {

std::string outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Succeeded: return "Succeeded";
        case Outcome::ExhaustedBudget: return "ExhaustedBudget";
        case Outcome::Stalled: return "Stalled";
        case Outcome::Blocked: return "Blocked";
    }
    return "?";
}

std::optional<double> response_key(const oracle::Response& r) {
    if (r.blocked) return std::nullopt;
    if (r.score) return *r.score;
    if (r.decision) return *r.decision == Decision::Accept ? 1.0 : 0.0;
    return std::nullopt;
}

namespace {

MinutiaeTemplate random_fp_candidate(Rng& rng, const FpAttackConfig& cfg, int w, int h) {
    int n = static_cast<int>(rng.uniform_int(cfg.minutiae_init_min, cfg.minutiae_init_max));
    return random_template(rng, n, w, h);
}

MinutiaeTemplate mutate_fp(const MinutiaeTemplate& parent, const FpAttackConfig& cfg, Rng& rng) {
    MinutiaeTemplate t = parent;
    double pick = rng.uniform() * (cfg.w_perturb + cfg.w_add + cfg.w_delete);
    if (pick < cfg.w_perturb && !t.minutiae.empty()) {
        Minutia& m = t.minutiae[static_cast<size_t>(
            rng.uniform_int(0, static_cast<int64_t>(t.minutiae.size()) - 1))];
        // squared-uniform magnitudes bias toward fine moves; the endgame needs
        // sub-pixel-scale refinement while early search needs reach
        double u = rng.uniform();
        double mag = cfg.perturb_radius * u * u;
        double dir = rng.uniform(0.0, kTwoPi);
        m.x = std::clamp(static_cast<int>(std::lround(m.x + mag * std::cos(dir))), 0, t.width - 1);
        m.y = std::clamp(static_cast<int>(std::lround(m.y + mag * std::sin(dir))), 0, t.height - 1);
        double v = rng.uniform();
        m.theta = wrap_angle_2pi(m.theta + cfg.perturb_angle * (2.0 * rng.uniform() - 1.0) * v);
    } else if (pick < cfg.w_perturb + cfg.w_add) {
        Minutia m;
        m.x = static_cast<int>(rng.uniform_int(0, t.width - 1));
        m.y = static_cast<int>(rng.uniform_int(0, t.height - 1));
        m.theta = rng.uniform(0.0, kTwoPi);
        m.kind = rng.uniform() < 0.5 ? MinutiaKind::Termination : MinutiaKind::Bifurcation;
        t.minutiae.push_back(m);
    } else if (t.minutiae.size() > 1) {  // delete never empties the template
        t.minutiae.erase(t.minutiae.begin() +
                         rng.uniform_int(0, static_cast<int64_t>(t.minutiae.size()) - 1));
    }
    return t;
}

// Shared five-step loop; `timing_mode` keys selection on work units and
// records window-normalized proxies in the trace.
FpAttackResult fp_loop(oracle::FpOracle& oracle, const FpAttackConfig& cfg, int width,
                       int height, Seed seed, bool timing_mode) {
    Rng rng(seed);
    FpAttackResult result;
    result.trace.outcome = Outcome::ExhaustedBudget;

    MinutiaeTemplate parent;
    double parent_key = 0.0;
    bool have_parent = false;
    double best_seen = 0.0;
    uint64_t used = 0;
    int stalls = 0;

    while (used < cfg.max_oracle_calls) {
        // step 1 / step 5: a fresh population or P mutants of the best
        std::vector<MinutiaeTemplate> generation;
        for (int i = 0; i < cfg.population; ++i) {
            generation.push_back(have_parent ? mutate_fp(parent, cfg, rng)
                                             : random_fp_candidate(rng, cfg, width, height));
        }

        // step 2: query the system for each candidate
        std::vector<oracle::Response> responses;
        size_t queried = 0;
        for (const MinutiaeTemplate& cand : generation) {
            if (used >= cfg.max_oracle_calls) break;
            responses.push_back(oracle.query(cand));
            ++used;
            ++queried;
            if (responses.back().blocked) break;
        }

        // trace observations: scores directly, or a min-max proxy over the window
        std::vector<std::optional<double>> observed(queried);
        if (timing_mode) {
            uint64_t lo = UINT64_MAX, hi = 0;
            for (size_t i = 0; i < queried; ++i) {
                if (responses[i].work_units) {
                    lo = std::min(lo, *responses[i].work_units);
                    hi = std::max(hi, *responses[i].work_units);
                }
            }
            for (size_t i = 0; i < queried; ++i) {
                if (responses[i].work_units) {
                    observed[i] = hi == lo ? 0.5
                                           : static_cast<double>(*responses[i].work_units - lo) /
                                                 static_cast<double>(hi - lo);
                }
            }
        } else {
            for (size_t i = 0; i < queried; ++i) observed[i] = responses[i].score;
        }

        int gen_best = -1;
        double gen_best_key = 0.0;
        for (size_t i = 0; i < queried; ++i) {
            const oracle::Response& r = responses[i];
            TraceEntry e;
            e.call = oracle.calls() - (queried - 1 - i);
            e.candidate_size = static_cast<int>(generation[i].minutiae.size());
            e.observed = observed[i];
            e.accepted = !r.blocked && r.decision && *r.decision == Decision::Accept;
            best_seen = std::max(best_seen, e.observed.value_or(0.0));
            e.best = best_seen;
            result.trace.entries.push_back(e);

            if (r.blocked) {
                result.best = have_parent ? parent : generation[i];
                result.trace.outcome = Outcome::Blocked;
                return result;
            }
            if (e.accepted) {  // step 4
                result.best = generation[i];
                result.trace.outcome = Outcome::Succeeded;
                return result;
            }
            std::optional<double> key;
            if (timing_mode) {
                if (r.work_units) key = static_cast<double>(*r.work_units);
            } else {
                key = response_key(r);
            }
            if (key && (gen_best < 0 || *key > gen_best_key)) {
                gen_best = static_cast<int>(i);
                gen_best_key = *key;
            }
        }

        // step 3: adopt the generation best on strict improvement
        if (gen_best >= 0 && (!have_parent || gen_best_key > parent_key)) {
            parent = generation[static_cast<size_t>(gen_best)];
            parent_key = gen_best_key;
            have_parent = true;
            stalls = 0;
        } else {
            ++stalls;
            if (stalls >= cfg.stall_generations) {
                result.best = have_parent ? parent : generation.front();
                result.trace.outcome = Outcome::Stalled;
                return result;
            }
        }
    }

    result.best = have_parent ? parent : MinutiaeTemplate{width, height, 500, {}};
    result.trace.outcome = Outcome::ExhaustedBudget;
    return result;
}

}  // namespace

FpAttackResult attack_fp(oracle::FpOracle& oracle, const FpAttackConfig& cfg, int width,
                         int height, Seed seed) {
    return fp_loop(oracle, cfg, width, height, seed, false);
}

FpAttackResult timing_attack(oracle::FpOracle& oracle, const FpAttackConfig& cfg, int width,
                             int height, Seed seed) {
    return fp_loop(oracle, cfg, width, height, seed, true);
}

FaceAttackResult attack_face(oracle::FaceOracle& oracle, const face::FaceDb& db,
                             const face::FaceModel& model, const FaceAttackConfig& cfg,
                             Seed seed) {
    Rng rng(seed);
    FaceAttackResult result;
    result.trace.outcome = Outcome::ExhaustedBudget;
    double best_seen = 0.0;

    auto record = [&](const oracle::Response& r, int summary) -> TraceEntry& {
        TraceEntry e;
        e.call = oracle.calls();
        e.candidate_size = summary;
        e.observed = r.score;
        e.accepted = !r.blocked && r.decision && *r.decision == Decision::Accept;
        best_seen = std::max(best_seen, response_key(r).value_or(0.0));
        e.best = best_seen;
        result.trace.entries.push_back(e);
        return result.trace.entries.back();
    };

    // step 3: scan the database for the best initial image
    GrayImage current;
    double current_key = -1.0;
    for (size_t i = 0; i < db.images.size(); ++i) {
        oracle::Response r = oracle.query(db.images[i]);
        TraceEntry& e = record(r, static_cast<int>(i));
        if (r.blocked) {
            result.best = current_key >= 0 ? current : db.images[i];
            result.trace.outcome = Outcome::Blocked;
            return result;
        }
        if (e.accepted) {
            result.best = db.images[i];
            result.trace.outcome = Outcome::Succeeded;
            return result;
        }
        auto key = response_key(r);
        if (key && *key > current_key) {
            current_key = *key;
            current = db.images[i];
        }
    }
    if (current.pixels.empty()) {
        result.best = db.images.front();
        result.trace.outcome = Outcome::Stalled;
        return result;
    }

    const size_t n = current.pixels.size();
    int stalls = 0;
    for (int iter = 0; iter < cfg.i_max; ++iter) {
        // step 4a: one random eigenface per iteration
        size_t k = static_cast<size_t>(
            rng.uniform_int(0, static_cast<int64_t>(model.eigenfaces.size()) - 1));
        const std::vector<double>& ef = model.eigenfaces[k];

        int best_j = -1;
        double best_key = 0.0;
        GrayImage best_img;
        for (size_t j = 0; j < cfg.steps.size(); ++j) {
            GrayImage cand(model.width, model.height);
            for (size_t i = 0; i < n; ++i) {  // step 4e: truncation
                cand.pixels[i] = static_cast<uint8_t>(
                    clamp_pixel(current.pixels[i] + cfg.steps[j] * ef[i]));
            }
            oracle::Response r = oracle.query(cand);
            TraceEntry& e = record(r, static_cast<int>(k));
            if (r.blocked) {
                result.best = current;
                result.trace.outcome = Outcome::Blocked;
                return result;
            }
            if (e.accepted) {
                result.best = cand;
                result.trace.outcome = Outcome::Succeeded;
                return result;
            }
            auto key = response_key(r);
            if (key && (best_j < 0 || *key > best_key)) {
                best_j = static_cast<int>(j);
                best_key = *key;
                best_img = std::move(cand);
            }
        }

        // steps 4c/4d: adopt c_max only on strict improvement
        if (best_j >= 0 && best_key > current_key) {
            current = std::move(best_img);
            current_key = best_key;
            stalls = 0;
        } else {
            ++stalls;
            if (stalls >= cfg.stall_limit) {
                result.best = current;
                result.trace.outcome = Outcome::Stalled;
                return result;
            }
        }
    }
    result.best = current;
    result.trace.outcome = Outcome::ExhaustedBudget;
    return result;
}

}  // namespace biolab::attack
