#pragma once

#include "wzlq/codec.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace wzlq {

// A codec with either the lattice fine quantizer or a trained matched
// codebook. The pointers are non-owning; the referenced objects must
// outlive the variant.
struct CodecVariant {
    const WzLvq* q = nullptr;
    const MatchedFineCodebook* matched = nullptr; // null => lattice fine

    int encode_x(const Eigen::VectorXd& x) const;
    Eigen::VectorXd decode_y(int index, const Eigen::VectorXd& y) const;
    // The reconstruction the decoder would produce with perfect knowledge
    // of x's fine cell; deviations from it are decode errors.
    Eigen::VectorXd correct_target(const Eigen::VectorXd& x) const;
};

struct DistortionReport {
    double d_bar = 0.0;
    double alpha = 0.0; // unconditional contribution of correct-decode trials
    double beta = 0.0;  // unconditional contribution of error trials
    double p_err = 0.0;
    double cond_mean_correct = 0.0;
    double cond_mean_error = 0.0;
    double d_bar_stderr = 0.0;
    double alpha_stderr = 0.0;
    double beta_stderr = 0.0;
    double p_err_stderr = 0.0;
    long long trials = 0;
    uint64_t seed = 0;
};

struct RateEstimate {
    double empirical_entropy_rate = 0.0; // nats per sample
    double high_rate_approx = 0.0;       // (1/n) ln N
    std::vector<double> per_index_freq;
    long long trials = 0;
};

struct BetaBoundParams {
    int n = 1;
    long long N = 1;
    double s = 1.0;
    double sigma_x = 1.0;
    double rho = 0.0;
    double coarse_cell_volume = 1.0; // nu(s*kappa(Lambda))
};

// How the side-information pair is drawn in mc_distortion.
//  Joint:      (x, y) from the jointly Gaussian source.
//  PinnedZero: y = 0 (a coarse lattice point) and x ~ f(X|Y=0); this is the
//              geometry under which the matched codebook is defined.
enum class SideInfoMode { Joint, PinnedZero };

double wyner_bound(double sigma_x, double rho, double rate_nats);

std::pair<double, double> gn_bounds(int n);

// ||f||_{n/(n+2)} for an iid Gaussian with per-component variance v:
// closed form 2*pi*v*((n+2)/n)^((n+2)/2), with a quadrature cross-check.
double gaussian_conditional_norm(int n, double v);
double gaussian_conditional_norm_quadrature(int n, double v);

double predicted_alpha_lattice(double g_lambda, double s, int n, long long N);
double predicted_alpha_matched(int n, double v, long long N);

double figure_of_merit(double d_bar, double sigma_x, double rho, double rate_nats);

RateEstimate empirical_rate(const CodecVariant& cv, double sigma_x, long long trials,
                            uint64_t seed);

DistortionReport mc_distortion(const CodecVariant& cv, double sigma_x, double sigma_y,
                               double rho, long long trials, uint64_t seed,
                               SideInfoMode mode);

// Sphere constants: c_n = surface coefficient n*pi^(n/2)/Gamma(n/2+1),
// d_n = volume coefficient of the (n-1)-sphere, e_n = c_n/(d_n (N/2)^(n-1)).
double shell_surface_const(int n);
double shell_volume_const(int n);
double shell_e_const(int n, long long N);

// Geometric-series upper bound on beta; +infinity when the denominator
// underflows (s -> 0 at fixed rho).
double beta_upper_bound(const BetaBoundParams& p);

// Shell counts N_m of the lattice: number of vectors with squared norm m,
// m = 1..m_max, by exact bounded enumeration. Norms must be integers
// (raw A2 / Z^n bases).
std::vector<long long> theta_counts(const Lattice& lat, int m_max);

struct BetaSeries {
    double value = 0.0;
    double tail_bound = 0.0;
};

// Sharper beta estimate using exact shell counts, with a certified
// truncation tail; throws if the tail cannot be certified below tol.
BetaSeries exact_beta_series(const BetaBoundParams& p, const std::vector<long long>& counts,
                             int m_max, double tail_tol = 1e-12);

double excess_distortion_model(long long m, double p, double alpha_n, double beta_n);

} // namespace wzlq
