#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "wzlq/rng.hpp"

namespace wzlq {

struct GaussianPairSpec {
    double sigma_x = 1.0;
    double sigma_y = 1.0;
    double rho = 0.0;
    int dim = 1;
};

// Draws (x, y) with iid components, each pair jointly Gaussian with
// covariance [[sx^2, rho sx sy], [rho sx sy, sy^2]], via
// y_i = rho (sy/sx) x_i + sy sqrt(1-rho^2) w_i.
void sample_pair(const GaussianPairSpec& spec, Rng& rng, Eigen::VectorXd& x,
                 Eigen::VectorXd& y);

// Spatial Wiener process sampled at nodes m/n, iid across time slots:
// X_{m/n}(k) is the cumulative sum over m of N(0, sigma^2/n) increments.
struct BrownianField {
    int nodes = 0;
    double sigma = 0.0;
    int slots = 0;
    Eigen::MatrixXd samples; // nodes x slots
};

BrownianField gen_brownian_field(int nodes, double sigma, int slots, uint64_t seed);

} // namespace wzlq
