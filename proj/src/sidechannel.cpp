#include "biolab/sidechannel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace biolab::sidechannel {

TimedResponse timed_compare(const MinutiaeTemplate& a, const MinutiaeTemplate& b,
                            const match::MatchParams& p, const TimingModel& m, Seed seed) {
    match::Pairing pr = match::pair_minutiae(a, b, p);
    MatchScore s = match::compare_minutiae(a, b, p);

    Rng rng(seed);
    double noise = m.noise_sd > 0 ? rng.gaussian(0.0, m.noise_sd) : 0.0;
    double raw = static_cast<double>(m.base) +
                 static_cast<double>(m.per_candidate) * static_cast<double>(pr.candidate_count) +
                 std::floor(noise + 0.5);
    TimedResponse r;
    r.decision = decide(s, p.tau);
    r.work_units = raw < 0 ? 0 : static_cast<uint64_t>(raw);
    return r;
}

std::vector<double> time_to_score_proxy(const std::vector<TimedResponse>& samples) {
    std::vector<uint64_t> usable;
    for (const TimedResponse& s : samples) {
        if (!s.blocked) usable.push_back(s.work_units);
    }
    if (usable.empty()) throw EmptyWindow();
    uint64_t lo = *std::min_element(usable.begin(), usable.end());
    uint64_t hi = *std::max_element(usable.begin(), usable.end());
    std::vector<double> out;
    out.reserve(usable.size());
    for (uint64_t u : usable) {
        out.push_back(hi == lo ? 0.5 : static_cast<double>(u - lo) / static_cast<double>(hi - lo));
    }
    return out;
}

oracle::Response TimedMatcherOracle::do_query(const MinutiaeTemplate& probe) {
    TimingModel m = model_;
    match::Pairing pr = match::pair_minutiae(probe, target_, params_);
    MatchScore s = match::compare_minutiae(probe, target_, params_);
    double noise = m.noise_sd > 0 ? rng_.gaussian(0.0, m.noise_sd) : 0.0;
    double raw = static_cast<double>(m.base) + std::floor(noise + 0.5);
    if (!constant_time_) {
        raw += static_cast<double>(m.per_candidate) * static_cast<double>(pr.candidate_count);
    }
    oracle::Response r;
    r.decision = decide(s, params_.tau);
    r.work_units = raw < 0 ? 0 : static_cast<uint64_t>(raw);
    return r;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    size_t i = 0;
    while (i < idx.size()) {
        size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> ra = ranks(a), rb = ranks(b);
    double ma = 0, mb = 0;
    for (size_t i = 0; i < ra.size(); ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(ra.size());
    mb /= static_cast<double>(rb.size());
    double num = 0, da = 0, db = 0;
    for (size_t i = 0; i < ra.size(); ++i) {
        num += (ra[i] - ma) * (rb[i] - mb);
        da += (ra[i] - ma) * (ra[i] - ma);
        db += (rb[i] - mb) * (rb[i] - mb);
    }
    if (da <= 0 || db <= 0) return 0.0;
    return num / std::sqrt(da * db);
}

}  // namespace biolab::sidechannel
