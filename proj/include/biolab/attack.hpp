#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "biolab/core.hpp"
#include "biolab/face.hpp"
#include "biolab/oracle.hpp"

namespace biolab::attack {

enum class Outcome { Succeeded, ExhaustedBudget, Stalled, Blocked };

std::string outcome_name(Outcome o);

struct TraceEntry {
    uint64_t call = 0;                 // oracle-call index
    int candidate_size = 0;            // summary: minutiae count / nonzero coeffs
    std::optional<double> observed;    // score or timing proxy; absent if hidden/blocked
    double best = 0.0;                 // nondecreasing best-so-far
    bool accepted = false;
};

struct AttackTrace {
    std::vector<TraceEntry> entries;
    Outcome outcome = Outcome::ExhaustedBudget;
};

struct FpAttackConfig {
    int population = 8;
    int minutiae_init_min = 6;
    int minutiae_init_max = 20;
    double w_perturb = 0.6;
    double w_add = 0.2;
    double w_delete = 0.2;
    double perturb_radius = 10.0;   // pixels
    double perturb_angle = kPi / 6; // radians
    uint64_t max_oracle_calls = 20000;
    double tau = kDefaultTau;
    int stall_generations = 1000;   // generations without strict improvement
};

struct FaceAttackConfig {
    std::vector<double> steps = {-4, -2, -1, 1, 2, 4};
    int i_max = 3000;
    int stall_limit = 200;  // consecutive iterations without improvement
};

// Generic climber over an arbitrary candidate type: query proposed
// neighbors of the incumbent, adopt on strict improvement only.
template <class Candidate>
struct ClimbResult {
    Candidate best;
    AttackTrace trace;
};

// Effective selection key for a response: the score when visible, else the
// decision bit. Blocked responses yield no key.
std::optional<double> response_key(const oracle::Response& r);

template <class Candidate>
ClimbResult<Candidate> hill_climb(oracle::Oracle<Candidate>& oracle, Candidate init,
                                  const std::function<Candidate(const Candidate&, Rng&)>& propose,
                                  uint64_t max_calls, int stall_limit, Seed seed,
                                  int (*summarize)(const Candidate&) = nullptr) {
    ClimbResult<Candidate> result{std::move(init), {}};
    Rng rng(seed);
    if (max_calls == 0) {
        result.trace.outcome = Outcome::ExhaustedBudget;
        return result;
    }

    double best_key = -1.0;
    double best_seen = 0.0;
    bool have_best = false;
    int stalls = 0;
    uint64_t used = 0;

    Candidate current = result.best;
    bool first = true;
    while (used < max_calls) {
        Candidate cand = first ? current : propose(result.best, rng);
        first = false;
        oracle::Response r = oracle.query(cand);
        ++used;

        TraceEntry e;
        e.call = oracle.calls();
        e.candidate_size = summarize ? summarize(cand) : 0;
        if (r.blocked) {
            e.best = best_seen;
            result.trace.entries.push_back(e);
            result.trace.outcome = Outcome::Blocked;
            return result;
        }
        auto key = response_key(r);
        e.observed = r.score;
        e.accepted = r.decision && *r.decision == Decision::Accept;
        if (key && (!have_best || *key > best_key)) {
            best_key = *key;
            have_best = true;
            result.best = cand;
            stalls = 0;
        } else {
            ++stalls;
        }
        best_seen = std::max(best_seen, key.value_or(0.0));
        e.best = best_seen;
        result.trace.entries.push_back(e);
        if (e.accepted) {
            result.best = cand;
            result.trace.outcome = Outcome::Succeeded;
            return result;
        }
        if (stalls >= stall_limit) {
            result.trace.outcome = Outcome::Stalled;
            return result;
        }
    }
    result.trace.outcome = Outcome::ExhaustedBudget;
    return result;
}

struct FpAttackResult {
    MinutiaeTemplate best;
    AttackTrace trace;
};

// Five-step minutiae attack: seed a population, query all, keep the best,
// stop on acceptance, respawn mutants of the best (perturb/add/delete).
FpAttackResult attack_fp(oracle::FpOracle& oracle, const FpAttackConfig& cfg, int width,
                         int height, Seed seed);

// Same loop keyed on the timing proxy instead of a visible score.
FpAttackResult timing_attack(oracle::FpOracle& oracle, const FpAttackConfig& cfg, int width,
                             int height, Seed seed);

struct FaceAttackResult {
    GrayImage best;
    AttackTrace trace;
};

// Eigenface-space climb: start from the best-scoring database image, then
// repeatedly try every step value along one random eigenface.
FaceAttackResult attack_face(oracle::FaceOracle& oracle, const face::FaceDb& db,
                             const face::FaceModel& model, const FaceAttackConfig& cfg,
                             Seed seed);

}  // namespace biolab::attack
