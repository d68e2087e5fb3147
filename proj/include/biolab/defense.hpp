#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "biolab/attack.hpp"
#include "biolab/oracle.hpp"

namespace biolab::defense {

struct BadStep : std::runtime_error {
    BadStep() : std::runtime_error("quantization step must be in (0, 1]") {}
};

enum class ScoreVisibility { Full, Quantized, Hidden, Jittered };

struct RateLimit {
    uint64_t budget = 1;       // queries allowed per epoch
    uint64_t epoch_ticks = 1;  // logical ticks per epoch
};

struct DefensePolicy {
    ScoreVisibility visibility = ScoreVisibility::Full;
    double quant_step = 0.05;  // used when visibility == Quantized
    std::optional<RateLimit> rate_limit;

    std::string name() const;
};

// floor(s / step) * step, clamped into [0, 1].
MatchScore quantize_score(MatchScore s, double step);

// Uniform resample within the decision band: [tau, 1] for accepts,
// [0, tau) for rejects. The decision bit is always preserved.
MatchScore jitter_score(MatchScore s, double tau, Rng& rng);

// Oracle wrapper applying a visibility transform and an optional per-epoch
// query cap. Blocked responses carry neither score nor decision.
template <class Candidate>
class PolicyOracle : public oracle::Oracle<Candidate> {
public:
    PolicyOracle(oracle::Oracle<Candidate>& inner, DefensePolicy policy, double tau, Seed seed)
        : inner_(inner), policy_(policy), tau_(tau), rng_(seed) {}

    void tick() override {
        if (!policy_.rate_limit) return;
        if (++ticks_ >= policy_.rate_limit->epoch_ticks) {
            ticks_ = 0;
            used_this_epoch_ = 0;
        }
    }

protected:
    oracle::Response do_query(const Candidate& c) override {
        if (policy_.rate_limit) {
            if (used_this_epoch_ >= policy_.rate_limit->budget) {
                return oracle::Response{std::nullopt, std::nullopt, true, std::nullopt};
            }
            ++used_this_epoch_;
        }
        oracle::Response r = inner_.query(c);
        if (r.blocked || !r.score) return r;
        switch (policy_.visibility) {
            case ScoreVisibility::Full:
                break;
            case ScoreVisibility::Quantized:
                r.score = quantize_score(MatchScore{*r.score}, policy_.quant_step).value;
                break;
            case ScoreVisibility::Hidden:
                r.score.reset();
                break;
            case ScoreVisibility::Jittered:
                r.score = jitter_score(MatchScore{*r.score}, tau_, rng_).value;
                break;
        }
        return r;
    }

private:
    oracle::Oracle<Candidate>& inner_;
    DefensePolicy policy_;
    double tau_;
    Rng rng_;
    uint64_t ticks_ = 0;
    uint64_t used_this_epoch_ = 0;
};

enum class AttackKind { FpHillClimb, FpTiming };

std::string attack_name(AttackKind k);

struct DefenseCell {
    std::string attack;
    std::string policy;
    int trials = 0;
    int successes = 0;
    double median_calls = 0.0;  // among successes; 0 when none
    std::map<attack::Outcome, int> histogram;

    double success_rate() const {
        return trials > 0 ? static_cast<double>(successes) / trials : 0.0;
    }
};

struct DefenseReport {
    std::vector<DefenseCell> cells;
};

struct DefenseEvalSetup {
    int width = 256;
    int height = 288;
    int target_minutiae = 12;
    match::MatchParams matcher;
    attack::FpAttackConfig attack_cfg;
};

// Full (attack x policy) cross product; per-trial seeds derived from the
// master seed, so reports are reproducible.
DefenseReport evaluate_defenses(const std::vector<AttackKind>& attacks,
                                const std::vector<DefensePolicy>& policies, int trials,
                                Seed seed, const DefenseEvalSetup& setup = {});

}  // namespace biolab::defense
