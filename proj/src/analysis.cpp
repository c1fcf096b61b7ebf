#include "wzlq/analysis.hpp"
#include "wzlq/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wzlq {

int CodecVariant::encode_x(const Eigen::VectorXd& x) const {
    return matched ? encode_matched(*q, *matched, x) : encode(*q, x);
}

Eigen::VectorXd CodecVariant::decode_y(int index, const Eigen::VectorXd& y) const {
    return matched ? decode_matched(*q, *matched, index, y) : decode(*q, index, y);
}

Eigen::VectorXd CodecVariant::correct_target(const Eigen::VectorXd& x) const {
    return matched ? matched_target(*q, *matched, x) : fine_point(*q, x).embedding;
}

double wyner_bound(double sigma_x, double rho, double rate_nats) {
    if (rate_nats < 0.0) throw std::invalid_argument("rate must be >= 0");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("|rho| must be < 1");
    return sigma_x * sigma_x * (1.0 - rho * rho) * std::exp(-2.0 * rate_nats);
}

std::pair<double, double> gn_bounds(int n) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    double lg = std::lgamma(n / 2.0 + 1.0);
    double g_pow = std::exp(2.0 * lg / n); // Gamma(n/2+1)^(2/n)
    double lower = g_pow / ((n + 2.0) * M_PI);
    double upper = g_pow * std::tgamma(1.0 + 2.0 / n) / (n * M_PI);
    return {lower, upper};
}

double gaussian_conditional_norm(int n, double v) {
    if (n < 1 || !(v > 0.0)) throw std::invalid_argument("invalid norm arguments");
    return 2.0 * M_PI * v * std::pow((n + 2.0) / n, (n + 2.0) / 2.0);
}

double gaussian_conditional_norm_quadrature(int n, double v) {
    if (n < 1 || !(v > 0.0)) throw std::invalid_argument("invalid norm arguments");
    double p = static_cast<double>(n) / (n + 2.0);
    // One-dimensional integral of the Gaussian density to the power p,
    // by composite Simpson; the iid product then gives the n-dim integral.
    double sigma_eff = std::sqrt(v / p);
    double limit = 12.0 * sigma_eff;
    const int segments = 40000; // even
    double h = 2.0 * limit / segments;
    double norm_const = std::pow(2.0 * M_PI * v, -p / 2.0);
    auto f = [&](double x) { return norm_const * std::exp(-p * x * x / (2.0 * v)); };
    double acc = f(-limit) + f(limit);
    for (int i = 1; i < segments; ++i)
        acc += f(-limit + i * h) * ((i % 2) ? 4.0 : 2.0);
    double integral = acc * h / 3.0;
    // ||f||_{n/(n+2)} = (integral^n)^((n+2)/n) = integral^(n+2)
    return std::pow(integral, n + 2.0);
}

double predicted_alpha_lattice(double g_lambda, double s, int n, long long N) {
    double rate = std::log(static_cast<double>(N)) / n;
    return g_lambda * s * s * std::exp(-2.0 * rate);
}

double predicted_alpha_matched(int n, double v, long long N) {
    // G_n is known exactly for n = 1 (1/12) and n = 2 (hexagonal,
    // 5/(36*sqrt(3))); elsewhere fall back to the lower bound.
    double g;
    if (n == 1) g = 1.0 / 12.0;
    else if (n == 2) g = 5.0 / (36.0 * std::sqrt(3.0));
    else g = gn_bounds(n).first;
    double rate = std::log(static_cast<double>(N)) / n;
    return g * gaussian_conditional_norm(n, v) * std::exp(-2.0 * rate);
}

double figure_of_merit(double d_bar, double sigma_x, double rho, double rate_nats) {
    double w = wyner_bound(sigma_x, rho, rate_nats);
    if (!(w > 0.0)) throw std::invalid_argument("wyner bound must be positive");
    return d_bar / w;
}

RateEstimate empirical_rate(const CodecVariant& cv, double sigma_x, long long trials,
                            uint64_t seed) {
    if (trials < 10000) throw std::invalid_argument("need at least 1e4 trials");
    const int n = cv.q->lattice.dim;
    const long long N = cv.q->kappa.index_N;
    std::vector<long long> hist(N, 0);
    const int batches = 100;
    long long per_batch = trials / batches;
    for (int b = 0; b < batches; ++b) {
        Rng rng(seed, static_cast<uint64_t>(b));
        Eigen::VectorXd x(n);
        for (long long t = 0; t < per_batch; ++t) {
            for (int i = 0; i < n; ++i) x[i] = rng.gaussian(0.0, sigma_x);
            ++hist[cv.encode_x(x)];
        }
    }
    RateEstimate est;
    est.trials = per_batch * batches;
    est.high_rate_approx = std::log(static_cast<double>(N)) / n;
    est.per_index_freq.resize(N);
    double entropy = 0.0;
    for (long long k = 0; k < N; ++k) {
        double p = static_cast<double>(hist[k]) / est.trials;
        est.per_index_freq[k] = p;
        if (p > 0.0) entropy -= p * std::log(p);
    }
    est.empirical_entropy_rate = entropy / n;
    return est;
}

DistortionReport mc_distortion(const CodecVariant& cv, double sigma_x, double sigma_y,
                               double rho, long long trials, uint64_t seed,
                               SideInfoMode mode) {
    if (trials < 10000) throw std::invalid_argument("need at least 1e4 trials");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("|rho| must be < 1");
    const int n = cv.q->lattice.dim;
    const double cond_sd = sigma_x * std::sqrt(1.0 - rho * rho);

    const int batches = 100;
    long long per_batch = trials / batches;
    std::vector<double> b_dbar(batches), b_alpha(batches), b_beta(batches), b_p(batches);
    Accumulator sum_correct, sum_error;
    long long n_correct = 0, n_error = 0;

    for (int b = 0; b < batches; ++b) {
        Rng rng(seed, static_cast<uint64_t>(b));
        Accumulator a_c, a_e;
        long long c_c = 0, c_e = 0;
        Eigen::VectorXd x(n), y(n);
        for (long long t = 0; t < per_batch; ++t) {
            if (mode == SideInfoMode::Joint) {
                for (int i = 0; i < n; ++i) {
                    double gx = rng.gaussian();
                    double gy = rng.gaussian();
                    x[i] = sigma_x * gx;
                    y[i] = rho * sigma_y * gx + sigma_y * std::sqrt(1.0 - rho * rho) * gy;
                }
            } else {
                y.setZero();
                for (int i = 0; i < n; ++i) x[i] = rng.gaussian(0.0, cond_sd);
            }
            int idx = cv.encode_x(x);
            Eigen::VectorXd xhat = cv.decode_y(idx, y);
            Eigen::VectorXd target = cv.correct_target(x);
            double se = (x - xhat).squaredNorm() / n;
            double tol = 1e-9 * (1.0 + target.norm());
            bool ok = (xhat - target).norm() <= tol;
            if (ok) {
                a_c.add(se);
                ++c_c;
                sum_correct.add(se);
                ++n_correct;
            } else {
                a_e.add(se);
                ++c_e;
                sum_error.add(se);
                ++n_error;
            }
        }
        double denom = static_cast<double>(per_batch);
        b_alpha[b] = a_c.sum / denom;
        b_beta[b] = a_e.sum / denom;
        b_dbar[b] = (a_c.sum + a_e.sum) / denom;
        b_p[b] = static_cast<double>(c_e) / denom;
    }

    auto mean_and_se = [&](const std::vector<double>& vals, double& mean, double& se) {
        mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= (vals.size() - 1);
        se = std::sqrt(var / vals.size());
    };

    DistortionReport rep;
    rep.trials = per_batch * batches;
    rep.seed = seed;
    mean_and_se(b_dbar, rep.d_bar, rep.d_bar_stderr);
    mean_and_se(b_alpha, rep.alpha, rep.alpha_stderr);
    mean_and_se(b_beta, rep.beta, rep.beta_stderr);
    mean_and_se(b_p, rep.p_err, rep.p_err_stderr);
    rep.cond_mean_correct = n_correct ? sum_correct.sum / n_correct : 0.0;
    rep.cond_mean_error = n_error ? sum_error.sum / n_error : 0.0;
    return rep;
}

double shell_surface_const(int n) {
    // surface coefficient of the n-sphere: c_n = n * pi^(n/2) / Gamma(n/2+1)
    return n * std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double shell_volume_const(int n) {
    // volume coefficient of the (n-1)-dimensional sphere
    return std::pow(M_PI, (n - 1) / 2.0) / std::tgamma((n - 1) / 2.0 + 1.0);
}

double shell_e_const(int n, long long N) {
    return shell_surface_const(n) /
           (shell_volume_const(n) * std::pow(N / 2.0, n - 1.0));
}

namespace {

double beta_prefactor(const BetaBoundParams& p) {
    double cond_var = p.sigma_x * p.sigma_x * (1.0 - p.rho * p.rho);
    return (1.0 / p.n) * 2.0 * p.coarse_cell_volume * p.s * p.s /
           std::pow(2.0 * M_PI * cond_var, p.n / 2.0);
}

} // namespace

double beta_upper_bound(const BetaBoundParams& p) {
    double cond_var = p.sigma_x * p.sigma_x * (1.0 - p.rho * p.rho);
    if (!(p.s > 0.0) || !(cond_var > 0.0))
        throw std::invalid_argument("scale and conditional variance must be positive");
    double c = p.s * p.s / (2.0 * cond_var);
    // c can underflow to zero for extreme scales; the bound diverges there
    if (c == 0.0) return std::numeric_limits<double>::infinity();
    double qexp = std::exp(-c);
    if (1.0 - qexp <= 0.0) return std::numeric_limits<double>::infinity();
    return beta_prefactor(p) * shell_e_const(p.n, p.N) * qexp / (1.0 - qexp);
}

std::vector<long long> theta_counts(const Lattice& lat, int m_max) {
    if (m_max < 1 || m_max > 10000) throw std::invalid_argument("m_max out of range");
    std::vector<long long> counts(m_max + 1, 0);
    int radius = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(m_max)) /
                                            lat.sigma_min)) + 1;
    Eigen::VectorXi off = Eigen::VectorXi::Constant(lat.dim, -radius);
    while (true) {
        if (!off.isZero()) {
            double norm = (lat.basis * off.cast<double>()).squaredNorm();
            long long m = std::llround(norm);
            if (m >= 1 && m <= m_max && std::abs(norm - m) < 1e-6) ++counts[m];
        }
        int i = 0;
        for (; i < lat.dim; ++i) {
            if (off[i] < radius) {
                ++off[i];
                break;
            }
            off[i] = -radius;
        }
        if (i == lat.dim) break;
    }
    return counts;
}

BetaSeries exact_beta_series(const BetaBoundParams& p, const std::vector<long long>& counts,
                             int m_max, double tail_tol) {
    double cond_var = p.sigma_x * p.sigma_x * (1.0 - p.rho * p.rho);
    double c = p.s * p.s / (2.0 * cond_var);
    double pref = beta_prefactor(p);

    double series = 0.0;
    for (int m = 1; m <= m_max && m < static_cast<int>(counts.size()); ++m)
        series += static_cast<double>(counts[m]) * std::exp(-c * p.n * m);

    // Tail certificate: beyond m_max, N_m <= e_n * m^(n-1), and the terms
    // decay at least geometrically with ratio r < 1.
    double r = std::exp(-c * p.n);
    if (!(r < 1.0)) throw std::runtime_error("series tail is not certifiable (ratio >= 1)");
    double e_n = shell_e_const(p.n, p.N);
    double tail = 0.0;
    int m = m_max + 1;
    const int chunk = 10000;
    for (int i = 0; i < chunk; ++i, ++m)
        tail += std::pow(static_cast<double>(m), p.n - 1.0) * std::exp(-c * p.n * m);
    // geometric remainder: for m >= m', m^(n-1) r^m shrinks by at least
    // r * ((m+1)/m)^(n-1) per step
    double ratio = r * std::pow(static_cast<double>(m + 1) / m, p.n - 1.0);
    if (ratio >= 1.0) throw std::runtime_error("series tail is not certifiable");
    tail += std::pow(static_cast<double>(m), p.n - 1.0) * std::exp(-c * p.n * m) /
            (1.0 - ratio);
    double tail_bound = pref * e_n * tail;
    if (tail_bound > tail_tol)
        throw std::runtime_error("series tail exceeds the requested tolerance");

    BetaSeries out;
    out.value = pref * series;
    out.tail_bound = tail_bound;
    return out;
}

double excess_distortion_model(long long m, double p, double alpha_n, double beta_n) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("p must be in [0,1]");
    double mp = static_cast<double>(m) * p;
    return alpha_n + beta_n * mp * (1.0 + (m - 1) * p);
}

} // namespace wzlq
