#include "biolab/core.hpp"

namespace biolab {

MinutiaeTemplate random_template(Rng& rng, int n, int width, int height, int resolution) {
    MinutiaeTemplate t;
    t.width = width;
    t.height = height;
    t.resolution = resolution;
    t.minutiae.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Minutia m;
        m.x = static_cast<int>(rng.uniform_int(0, width - 1));
        m.y = static_cast<int>(rng.uniform_int(0, height - 1));
        m.theta = rng.uniform(0.0, kTwoPi);
        m.kind = rng.uniform() < 0.5 ? MinutiaKind::Termination : MinutiaKind::Bifurcation;
        t.minutiae.push_back(m);
    }
    return t;
}

}  // namespace biolab
