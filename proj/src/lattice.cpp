#include "wzlq/lattice.hpp"
#include "wzlq/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace wzlq {

Lattice make_lattice(const Eigen::MatrixXd& basis, bool det_normalized) {
    if (basis.rows() != basis.cols() || basis.rows() < 1)
        throw std::invalid_argument("lattice basis must be square and non-empty");
    Lattice lat;
    lat.dim = static_cast<int>(basis.rows());
    lat.basis = basis;
    double det = basis.determinant();
    if (std::abs(det) < 1e-12)
        throw std::invalid_argument("lattice basis is singular");
    lat.det_abs = std::abs(det);
    lat.inv = basis.inverse();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(basis);
    lat.sigma_min = svd.singularValues().minCoeff();
    lat.det_normalized = det_normalized;
    if (det_normalized && std::abs(lat.det_abs - 1.0) > 1e-12)
        throw std::invalid_argument("det_normalized lattice must have |det| = 1");
    return lat;
}

Lattice make_zn(int n) {
    if (n < 1) throw std::invalid_argument("dimension must be positive");
    return make_lattice(Eigen::MatrixXd::Identity(n, n), true);
}

Lattice make_a2(bool det_normalize) {
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.5,
         0.0, std::sqrt(3.0) / 2.0;
    if (det_normalize) {
        b /= std::sqrt(std::sqrt(3.0) / 2.0);
        return make_lattice(b, true);
    }
    return make_lattice(b, false);
}

Lattice scale(const Lattice& lat, double s) {
    if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
    return make_lattice(lat.basis * s, false);
}

double voronoi_volume(const Lattice& lat) { return lat.det_abs; }

LatticePoint point_from_coords(const Lattice& lat, const Eigen::VectorXi& coords) {
    LatticePoint p;
    p.coords = coords;
    p.embedding = lat.basis * coords.cast<double>();
    return p;
}

namespace {

bool lex_less(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
}

} // namespace

LatticePoint nearest_point(const Lattice& lat, const Eigen::VectorXd& x) {
    if (x.size() != lat.dim) throw std::invalid_argument("dimension mismatch");
    if (!x.allFinite()) throw std::invalid_argument("non-finite input");

    Eigen::VectorXd c_real = lat.inv * x;
    Eigen::VectorXi c0(lat.dim);
    for (int i = 0; i < lat.dim; ++i) c0[i] = static_cast<int>(std::lround(c_real[i]));

    Eigen::VectorXd r0 = x - lat.basis * c0.cast<double>();
    double d0 = r0.norm();
    // Any coordinate vector c beating c0 satisfies
    // ||B(c - c0)|| <= ||x - Bc|| + ||x - Bc0|| <= 2 d0,
    // hence ||c - c0||_inf <= 2 d0 / sigma_min.
    int radius = static_cast<int>(std::ceil(2.0 * d0 / lat.sigma_min + 1e-9));

    Eigen::VectorXi best = c0;
    double best_d = d0 * d0;
    Eigen::VectorXi off = Eigen::VectorXi::Constant(lat.dim, -radius);
    while (true) {
        Eigen::VectorXi cand = c0 + off;
        Eigen::VectorXd diff = x - lat.basis * cand.cast<double>();
        double d = diff.squaredNorm();
        if (d < best_d || (d == best_d && lex_less(cand, best))) {
            best_d = d;
            best = cand;
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
    return point_from_coords(lat, best);
}

SecondMomentEstimate second_moment_mc(const Lattice& lat, long long trials, uint64_t seed) {
    if (trials < 10000) throw std::invalid_argument("need at least 1e4 trials");
    const int batches = 100;
    long long per_batch = trials / batches;
    std::vector<double> batch_means;
    batch_means.reserve(batches);
    double nu_pow = std::pow(lat.det_abs, 2.0 / lat.dim);
    Accumulator total;
    for (int b = 0; b < batches; ++b) {
        Rng rng(seed, static_cast<uint64_t>(b));
        Accumulator acc;
        Eigen::VectorXd u(lat.dim);
        for (long long t = 0; t < per_batch; ++t) {
            for (int i = 0; i < lat.dim; ++i) u[i] = rng.uniform();
            Eigen::VectorXd x = lat.basis * u;
            LatticePoint q = nearest_point(lat, x);
            double e2 = (x - q.embedding).squaredNorm();
            double val = e2 / lat.dim / nu_pow;
            acc.add(val);
            total.add(val);
        }
        batch_means.push_back(acc.mean());
    }
    double m = total.mean();
    double var = 0.0;
    for (double bm : batch_means) var += (bm - m) * (bm - m);
    var /= (batches - 1);
    SecondMomentEstimate est;
    est.g = m;
    est.stderr_ = std::sqrt(var / batches);
    est.trials = per_batch * batches;
    return est;
}

} // namespace wzlq
