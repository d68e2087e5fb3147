#pragma once

#include <stdexcept>
#include <vector>

#include "biolab/matcher.hpp"
#include "biolab/oracle.hpp"

namespace biolab::sidechannel {

struct EmptyWindow : std::runtime_error {
    EmptyWindow() : std::runtime_error("no usable samples in the window") {}
};

struct TimedResponse {
    Decision decision = Decision::Reject;
    bool blocked = false;
    uint64_t work_units = 0;
};

// Simulated effort model: the matcher's dominant loop is candidate-pair
// enumeration, so elapsed work scales with the candidate count.
struct TimingModel {
    uint64_t base = 50;
    uint64_t per_candidate = 1;
    double noise_sd = 2.0;
};

// work_units = base + per_candidate * candidate_count + seeded noise,
// floored at 0; the score is never exposed.
TimedResponse timed_compare(const MinutiaeTemplate& a, const MinutiaeTemplate& b,
                            const match::MatchParams& p, const TimingModel& m, Seed seed);

// Min-max normalization of work_units into [0, 1]; all-equal windows map to
// 0.5; blocked samples are excluded.
std::vector<double> time_to_score_proxy(const std::vector<TimedResponse>& samples);

// Decision + work units only; scores stay hidden. constant_time simulates
// the hardened fixed-work matcher (no candidate term).
class TimedMatcherOracle : public oracle::FpOracle {
public:
    TimedMatcherOracle(MinutiaeTemplate target, match::MatchParams params, TimingModel model,
                       Seed seed, bool constant_time = false)
        : target_(std::move(target)),
          params_(params),
          model_(model),
          rng_(seed),
          constant_time_(constant_time) {}

protected:
    oracle::Response do_query(const MinutiaeTemplate& probe) override;

private:
    MinutiaeTemplate target_;
    match::MatchParams params_;
    TimingModel model_;
    Rng rng_;
    bool constant_time_;
};

// Spearman rank correlation; exposed for the calibration and for tests.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace biolab::sidechannel
