#include "wzlq/codec.hpp"
#include "wzlq/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wzlq {

WzLvq make_codec(const Lattice& lat, const SimilarityMap& kappa, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
    WzLvq q;
    q.lattice = lat;
    q.kappa = kappa;
    q.s = s;
    q.cosets = enumerate_cosets(lat, kappa);
    q.fine = scale(lat, s);
    q.coarse = make_lattice(kappa.matrix * lat.basis * s, false);
    return q;
}

LatticePoint fine_point(const WzLvq& q, const Eigen::VectorXd& x) {
    return nearest_point(q.fine, x);
}

int encode(const WzLvq& q, const Eigen::VectorXd& x) {
    LatticePoint fp = nearest_point(q.fine, x);
    // integer coordinates are shared between Lambda and s*Lambda
    return coset_index(q.cosets, fp.coords);
}

int encode_two_step(const WzLvq& q, const Eigen::VectorXd& x) {
    LatticePoint cp = nearest_point(q.coarse, x);
    Eigen::VectorXd r = x - cp.embedding;
    LatticePoint fp = nearest_point(q.fine, r);
    return coset_index(q.cosets, fp.coords);
}

Eigen::VectorXd decode(const WzLvq& q, int index, const Eigen::VectorXd& y) {
    if (index < 0 || index >= static_cast<int>(q.cosets.representatives.size()))
        throw std::invalid_argument("invalid coset index");
    Eigen::VectorXd rep = q.s * q.cosets.representatives[index].embedding;
    LatticePoint shift = nearest_point(q.coarse, y - rep);
    return rep + shift.embedding;
}

double scale_schedule(double rho, double sigma_x) {
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("|rho| must be < 1");
    if (!(sigma_x > 0.0)) throw std::invalid_argument("sigma_x must be positive");
    double t = sigma_x * std::sqrt(1.0 - rho * rho);
    if (t > 1.0)
        throw std::invalid_argument("sigma_x*sqrt(1-rho^2) >= 1 is outside the schedule regime");
    if (t == 1.0) return 0.0;
    return t * std::log(1.0 / t);
}

namespace {

// Acklam's rational approximation of the standard normal quantile,
// accurate to about 1e-9 over (0, 1); ample for seeding Lloyd.
double inv_normal_cdf(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile argument out of (0,1)");
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > phigh) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

int nearest_codebook_index(const std::vector<Eigen::VectorXd>& points,
                           const Eigen::VectorXd& r) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        double d = (r - points[i]).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace

MatchedFineCodebook train_matched_fine(const WzLvq& q, double rho, double sigma_x,
                                       long long samples, int iters, uint64_t seed) {
    const int n = q.lattice.dim;
    const long long N = q.kappa.index_N;
    if (N < 1) throw std::invalid_argument("empty codebook");
    double v = sigma_x * sigma_x * (1.0 - rho * rho);
    double sd = std::sqrt(v);

    // Conditional samples folded into the zero coarse cell.
    std::vector<Eigen::VectorXd> xs;
    xs.reserve(samples);
    Rng rng(seed, 0);
    for (long long t = 0; t < samples; ++t) {
        Eigen::VectorXd x(n);
        for (int i = 0; i < n; ++i) x[i] = rng.gaussian(0.0, sd);
        LatticePoint cp = nearest_point(q.coarse, x);
        xs.push_back(x - cp.embedding);
    }

    MatchedFineCodebook cb;
    cb.points.reserve(N);
    if (n == 1) {
        // Companding start: the optimal point density is proportional to
        // the cube root of the Gaussian density, which is the density of a
        // Gaussian with variance 3 v. Seeding at its quantiles leaves
        // Lloyd only local polishing to do.
        for (long long i = 0; i < N; ++i) {
            double u = (static_cast<double>(i) + 0.5) / static_cast<double>(N);
            Eigen::VectorXd p(1);
            p << std::sqrt(3.0) * sd * inv_normal_cdf(u);
            cb.points.push_back(p);
        }
    } else {
        // Start from the coset representatives, shrunk toward the
        // conditional spread so the first assignment already populates
        // most cells.
        double max_rep = 0.0;
        for (const auto& rep : q.cosets.representatives)
            max_rep = std::max(max_rep, (q.s * rep.embedding).norm());
        double shrink = 1.0;
        double target = 4.0 * sd * std::sqrt(static_cast<double>(n));
        if (max_rep > target && max_rep > 0.0) shrink = target / max_rep;
        for (const auto& rep : q.cosets.representatives)
            cb.points.push_back(shrink * q.s * rep.embedding);
    }
    // Keep every starting point inside the zero coarse cell.
    for (auto& p : cb.points) p -= nearest_point(q.coarse, p).embedding;

    if (N == 1) {
        cb.points[0] = Eigen::VectorXd::Zero(n);
        return cb;
    }

    std::vector<int> assign(xs.size());
    std::vector<double> dist(xs.size());
    for (int it = 0; it < iters; ++it) {
        for (size_t k = 0; k < xs.size(); ++k) {
            assign[k] = nearest_codebook_index(cb.points, xs[k]);
            dist[k] = (xs[k] - cb.points[assign[k]]).squaredNorm();
        }
        // Re-seed empty cells at the currently worst-covered samples.
        std::vector<long long> counts(N, 0);
        for (int a : assign) ++counts[a];
        for (long long c = 0; c < N; ++c) {
            if (counts[c] != 0) continue;
            size_t far_k = 0;
            double far_d = -1.0;
            for (size_t k = 0; k < xs.size(); ++k) {
                if (dist[k] > far_d) {
                    far_d = dist[k];
                    far_k = k;
                }
            }
            long long old = assign[far_k];
            if (counts[old] > 1) {
                --counts[old];
                cb.points[c] = xs[far_k];
                assign[far_k] = static_cast<int>(c);
                counts[c] = 1;
                dist[far_k] = 0.0;
            }
        }
        double total = 0.0;
        for (size_t k = 0; k < xs.size(); ++k)
            total += (xs[k] - cb.points[assign[k]]).squaredNorm();
        cb.lloyd_distortion_per_iter.push_back(total / static_cast<double>(xs.size()) / n);
        // Centroid update.
        std::vector<Eigen::VectorXd> sums(N, Eigen::VectorXd::Zero(n));
        std::fill(counts.begin(), counts.end(), 0);
        for (size_t k = 0; k < xs.size(); ++k) {
            sums[assign[k]] += xs[k];
            ++counts[assign[k]];
        }
        for (long long c = 0; c < N; ++c)
            if (counts[c] > 0) cb.points[c] = sums[c] / static_cast<double>(counts[c]);
    }
    return cb;
}

int encode_matched(const WzLvq& q, const MatchedFineCodebook& cb, const Eigen::VectorXd& x) {
    LatticePoint cp = nearest_point(q.coarse, x);
    return nearest_codebook_index(cb.points, x - cp.embedding);
}

Eigen::VectorXd matched_target(const WzLvq& q, const MatchedFineCodebook& cb,
                               const Eigen::VectorXd& x) {
    LatticePoint cp = nearest_point(q.coarse, x);
    int idx = nearest_codebook_index(cb.points, x - cp.embedding);
    return cb.points[idx] + cp.embedding;
}

Eigen::VectorXd decode_matched(const WzLvq& q, const MatchedFineCodebook& cb, int index,
                               const Eigen::VectorXd& y) {
    if (index < 0 || index >= static_cast<int>(cb.points.size()))
        throw std::invalid_argument("invalid matched index");
    const Eigen::VectorXd& p = cb.points[index];
    LatticePoint shift = nearest_point(q.coarse, y - p);
    return p + shift.embedding;
}

} // namespace wzlq
