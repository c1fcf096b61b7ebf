#pragma once

#include "wzlq/sublattice.hpp"

#include <cstdint>
#include <vector>

namespace wzlq {

// The quantizer triplet (Lambda, kappa, s): fine lattice s*Lambda, coarse
// lattice s*kappa(Lambda), and the coset table between them. The encoder
// sends only the coset index; the decoder resolves it against side
// information.
struct WzLvq {
    Lattice lattice; // base Lambda, unscaled
    SimilarityMap kappa;
    double s = 1.0;
    CosetTable cosets;
    Lattice fine;   // s * Lambda
    Lattice coarse; // s * kappa(Lambda)
};

WzLvq make_codec(const Lattice& lat, const SimilarityMap& kappa, double s);

// Coset index of Q_fine(x). Uses the identity
// f(x) = Q_fine(x - Q_coarse(x)) = Q_fine(x) - Q_coarse(x),
// both forms are exposed and tested equal.
int encode(const WzLvq& q, const Eigen::VectorXd& x);
int encode_two_step(const WzLvq& q, const Eigen::VectorXd& x);

// Fine quantization of x, exposed so callers can label decode errors.
LatticePoint fine_point(const WzLvq& q, const Eigen::VectorXd& x);

// Nearest member of the selected coset to y:
// xhat = s*rep + Q_coarse(y - s*rep), exact by the bounded lattice search.
Eigen::VectorXd decode(const WzLvq& q, int index, const Eigen::VectorXd& y);

// The correlation-driven scale s = t * ln(1/t) with t = sigma_x*sqrt(1-rho^2).
// Only meaningful for t < 1; t == 1 returns 0 (boundary of the regime),
// t > 1 is rejected.
double scale_schedule(double rho, double sigma_x);

// Fixed-rate fine codebook matched to the conditional density f(X|Y=0),
// trained by Lloyd iterations on samples folded into the zero coarse cell.
struct MatchedFineCodebook {
    std::vector<Eigen::VectorXd> points;
    std::vector<double> lloyd_distortion_per_iter;
};

MatchedFineCodebook train_matched_fine(const WzLvq& q, double rho, double sigma_x,
                                       long long samples, int iters, uint64_t seed);

int encode_matched(const WzLvq& q, const MatchedFineCodebook& cb, const Eigen::VectorXd& x);

// Index of the matched point the encoder selects together with the coarse
// shift of x itself; the pair identifies the intended reconstruction.
Eigen::VectorXd matched_target(const WzLvq& q, const MatchedFineCodebook& cb,
                               const Eigen::VectorXd& x);

Eigen::VectorXd decode_matched(const WzLvq& q, const MatchedFineCodebook& cb, int index,
                               const Eigen::VectorXd& y);

} // namespace wzlq
