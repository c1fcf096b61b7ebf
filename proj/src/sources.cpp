#include "wzlq/sources.hpp"

#include <cmath>
#include <stdexcept>

namespace wzlq {

void sample_pair(const GaussianPairSpec& spec, Rng& rng, Eigen::VectorXd& x,
                 Eigen::VectorXd& y) {
    if (!(std::abs(spec.rho) < 1.0)) throw std::invalid_argument("|rho| must be < 1");
    x.resize(spec.dim);
    y.resize(spec.dim);
    double cross = spec.rho * spec.sigma_y / spec.sigma_x;
    double resid = spec.sigma_y * std::sqrt(1.0 - spec.rho * spec.rho);
    for (int i = 0; i < spec.dim; ++i) {
        x[i] = spec.sigma_x * rng.gaussian();
        y[i] = cross * x[i] + resid * rng.gaussian();
    }
}

BrownianField gen_brownian_field(int nodes, double sigma, int slots, uint64_t seed) {
    if (nodes < 1 || slots < 1) throw std::invalid_argument("nodes and slots must be >= 1");
    BrownianField f;
    f.nodes = nodes;
    f.sigma = sigma;
    f.slots = slots;
    f.samples.resize(nodes, slots);
    double inc_sd = sigma / std::sqrt(static_cast<double>(nodes));
    // one substream per slot, so the field is reproducible regardless of
    // how slots are distributed over threads
    for (int k = 0; k < slots; ++k) {
        Rng rng(seed, static_cast<uint64_t>(k));
        double acc = 0.0;
        for (int m = 0; m < nodes; ++m) {
            acc += rng.gaussian(0.0, inc_sd);
            f.samples(m, k) = acc;
        }
    }
    return f;
}

} // namespace wzlq
