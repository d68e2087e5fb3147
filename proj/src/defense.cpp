#include "biolab/defense.hpp"

#include <algorithm>
#include <cmath>

#include "biolab/sidechannel.hpp"

namespace biolab::defense {

MatchScore quantize_score(MatchScore s, double step) {
    if (step <= 0.0 || step > 1.0) throw BadStep();
    double q = std::floor(s.value / step) * step;
    if (q < 0.0) q = 0.0;
    if (q > 1.0) q = 1.0;
    return MatchScore{q};
}

MatchScore jitter_score(MatchScore s, double tau, Rng& rng) {
    if (s.value >= tau) return MatchScore{rng.uniform(tau, 1.0)};
    return MatchScore{rng.uniform(0.0, tau)};
}

std::string DefensePolicy::name() const {
    std::string n;
    switch (visibility) {
        case ScoreVisibility::Full: n = "full"; break;
        case ScoreVisibility::Quantized: n = "quantized(" + std::to_string(quant_step) + ")"; break;
        case ScoreVisibility::Hidden: n = "hidden"; break;
        case ScoreVisibility::Jittered: n = "jittered"; break;
    }
    if (rate_limit) n += "+limit(" + std::to_string(rate_limit->budget) + ")";
    return n;
}

std::string attack_name(AttackKind k) {
    switch (k) {
        case AttackKind::FpHillClimb: return "fp-hill-climb";
        case AttackKind::FpTiming: return "fp-timing";
    }
    return "?";
}

DefenseReport evaluate_defenses(const std::vector<AttackKind>& attacks,
                                const std::vector<DefensePolicy>& policies, int trials,
                                Seed seed, const DefenseEvalSetup& setup) {
    DefenseReport report;
    for (AttackKind ak : attacks) {
        for (size_t pi = 0; pi < policies.size(); ++pi) {
            const DefensePolicy& policy = policies[pi];
            DefenseCell cell;
            cell.attack = attack_name(ak);
            cell.policy = policy.name();
            cell.trials = trials;
            std::vector<double> success_calls;

            for (int trial = 0; trial < trials; ++trial) {
                uint64_t salt = (static_cast<uint64_t>(ak) << 40) ^
                                (static_cast<uint64_t>(pi) << 20) ^
                                static_cast<uint64_t>(trial);
                Seed target_seed = derive_seed(seed, salt * 2 + 1);
                Seed attack_seed = derive_seed(seed, salt * 2 + 2);

                Rng trng(target_seed);
                MinutiaeTemplate target = random_template(trng, setup.target_minutiae,
                                                          setup.width, setup.height);

                attack::FpAttackResult res;
                if (ak == AttackKind::FpHillClimb) {
                    oracle::MatcherOracle base(target, setup.matcher);
                    PolicyOracle<MinutiaeTemplate> wrapped(base, policy, setup.matcher.tau,
                                                           derive_seed(seed, salt * 2 + 3));
                    res = attack::attack_fp(wrapped, setup.attack_cfg, setup.width,
                                            setup.height, attack_seed);
                    if (res.trace.outcome == attack::Outcome::Succeeded) {
                        success_calls.push_back(static_cast<double>(wrapped.calls()));
                    }
                } else {
                    sidechannel::TimedMatcherOracle base(target, setup.matcher, {},
                                                         derive_seed(seed, salt * 2 + 4));
                    PolicyOracle<MinutiaeTemplate> wrapped(base, policy, setup.matcher.tau,
                                                           derive_seed(seed, salt * 2 + 3));
                    res = attack::timing_attack(wrapped, setup.attack_cfg, setup.width,
                                                setup.height, attack_seed);
                    if (res.trace.outcome == attack::Outcome::Succeeded) {
                        success_calls.push_back(static_cast<double>(wrapped.calls()));
                    }
                }
                cell.histogram[res.trace.outcome]++;
                if (res.trace.outcome == attack::Outcome::Succeeded) cell.successes++;
            }

            if (!success_calls.empty()) {
                std::sort(success_calls.begin(), success_calls.end());
                cell.median_calls = success_calls[success_calls.size() / 2];
            }
            report.cells.push_back(std::move(cell));
        }
    }
    return report;
}

}  // namespace biolab::defense
