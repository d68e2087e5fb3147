#pragma once

#include <optional>

#include "biolab/core.hpp"
#include "biolab/face.hpp"
#include "biolab/matcher.hpp"

namespace biolab::oracle {

// What the system boundary returns for one comparison. Blocked responses
// carry neither score nor decision; timing oracles carry work_units and
// never a score.
struct Response {
    std::optional<double> score;
    std::optional<Decision> decision;
    bool blocked = false;
    std::optional<uint64_t> work_units;
};

template <class Candidate>
class Oracle {
public:
    virtual ~Oracle() = default;

    Response query(const Candidate& c) {
        ++calls_;
        return do_query(c);
    }

    uint64_t calls() const { return calls_; }

    // Advance one logical tick (rate-limit epochs); no-op by default.
    virtual void tick() {}

protected:
    virtual Response do_query(const Candidate& c) = 0;

private:
    uint64_t calls_ = 0;
};

using FpOracle = Oracle<MinutiaeTemplate>;
using FaceOracle = Oracle<GrayImage>;

// Full-visibility fingerprint matcher boundary for one enrolled target.
class MatcherOracle : public FpOracle {
public:
    MatcherOracle(MinutiaeTemplate target, match::MatchParams params)
        : target_(std::move(target)), params_(params) {}

    const match::MatchParams& params() const { return params_; }

protected:
    Response do_query(const MinutiaeTemplate& probe) override {
        MatchScore s = match::compare_minutiae(probe, target_, params_);
        return Response{s.value, decide(s, params_.tau), false, std::nullopt};
    }

private:
    MinutiaeTemplate target_;
    match::MatchParams params_;
};

// Eigenface comparison boundary for one fixed target image.
class EigenfaceOracle : public FaceOracle {
public:
    EigenfaceOracle(const face::FaceModel& model, GrayImage target, double tau,
                    double d0 = 0.0)
        : model_(model), target_(std::move(target)), tau_(tau), d0_(d0) {}

protected:
    Response do_query(const GrayImage& probe) override {
        MatchScore s = face::compare_faces(model_, probe, target_, d0_);
        return Response{s.value, decide(s, tau_), false, std::nullopt};
    }

private:
    const face::FaceModel& model_;
    GrayImage target_;
    double tau_;
    double d0_;
};

}  // namespace biolab::oracle
