#include "wzlq/sublattice.hpp"

#include <cmath>
#include <deque>
#include <set>
#include <stdexcept>

namespace wzlq {

SimilarityMap make_similarity(const Lattice& lat, const Eigen::MatrixXd& kappa) {
    const int n = lat.dim;
    if (kappa.rows() != n || kappa.cols() != n)
        throw std::invalid_argument("kappa dimension mismatch");

    Eigen::MatrixXd gram = kappa.transpose() * kappa;
    double c = gram.trace() / n;
    if (!(c > 0.0)) throw std::invalid_argument("kappa is singular");
    if ((gram - c * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-9)
        throw std::invalid_argument("kappa^T kappa is not a multiple of the identity");

    // kappa in lattice coordinates must be an integer matrix.
    Eigen::MatrixXd coord_real = lat.inv * kappa * lat.basis;
    Eigen::MatrixXi coord(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double v = coord_real(i, j);
            long long r = std::llround(v);
            if (std::abs(v - static_cast<double>(r)) > 1e-9)
                throw std::invalid_argument("kappa does not map the lattice into itself");
            coord(i, j) = static_cast<int>(r);
        }

    SimilarityMap sm;
    sm.matrix = kappa;
    sm.coord_matrix = coord;
    sm.norm_c = c;
    double n_real = std::pow(c, n / 2.0);
    sm.index_N = std::llround(n_real);
    if (std::abs(n_real - static_cast<double>(sm.index_N)) > 1e-6)
        throw std::invalid_argument("c^(n/2) is not an integer");
    long long det_coord = std::llround(coord.cast<double>().determinant());
    if (std::llabs(det_coord) != sm.index_N)
        throw std::invalid_argument("index mismatch between c^(n/2) and |det kappa|");
    sm.unitary_part = kappa / std::sqrt(c);
    return sm;
}

SimilarityMap eisenstein_similarity(const Lattice& a2, int a, int b) {
    if (a == 0 && b == 0) throw std::invalid_argument("(a,b) must be nonzero");
    if (a2.dim != 2) throw std::invalid_argument("eisenstein similarity needs a 2-D lattice");
    // z = a + b*omega = (a - b/2) + i * b*sqrt(3)/2 acting as complex multiplication
    double re = a - b / 2.0;
    double im = b * std::sqrt(3.0) / 2.0;
    Eigen::MatrixXd kappa(2, 2);
    kappa << re, -im,
             im, re;
    return make_similarity(a2, kappa);
}

SimilarityMap scaling_similarity(const Lattice& lat, int k) {
    if (k < 1) throw std::invalid_argument("scaling factor must be >= 1");
    Eigen::MatrixXd kappa =
        static_cast<double>(k) * Eigen::MatrixXd::Identity(lat.dim, lat.dim);
    return make_similarity(lat, kappa);
}

namespace {

// Exact residue of c modulo K Z^n inside the fundamental parallelepiped
// K [0,1)^n. Uses the integer adjugate so boundary points never wobble:
// mu = floor(adj(K) c / det K), r = c - K mu.
Eigen::VectorXi parallelepiped_residue(const Eigen::MatrixXi& k_int,
                                       const Eigen::VectorXi& c) {
    const int n = static_cast<int>(k_int.rows());
    Eigen::MatrixXd kd = k_int.cast<double>();
    long long det = std::llround(kd.determinant());
    if (det == 0) throw std::invalid_argument("coarse coordinate matrix is singular");
    Eigen::MatrixXd adj_d = kd.determinant() * kd.inverse();
    Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> adj(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) adj(i, j) = std::llround(adj_d(i, j));

    Eigen::VectorXi mu(n);
    for (int i = 0; i < n; ++i) {
        long long t = 0;
        for (int j = 0; j < n; ++j) t += adj(i, j) * c[j];
        long long q = t / det;
        if ((t % det != 0) && ((t < 0) != (det < 0))) --q; // floor toward -inf
        mu[i] = static_cast<int>(q);
    }
    return c - k_int * mu;
}

std::vector<int> key_of(const Eigen::VectorXi& c) {
    return std::vector<int>(c.data(), c.data() + c.size());
}

// Minimum-norm member of the coset of `residue`, searched over a coarse
// coefficient box wide enough to cover the Voronoi cell for the
// well-conditioned similarity bases used here. Ties break toward the
// lexicographically smallest coarse offset, matching the nearest-point
// tie rule.
Eigen::VectorXi voronoi_representative(const Lattice& lat, const Eigen::MatrixXi& k_int,
                                       const Eigen::VectorXi& residue) {
    const int n = lat.dim;
    const int radius = 2;
    bool have_best = false;
    Eigen::VectorXi best = residue, best_off = Eigen::VectorXi::Zero(n);
    double best_d = 0.0;
    Eigen::VectorXi off = Eigen::VectorXi::Constant(n, -radius);
    auto lex_less = [](const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
        for (int i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    };
    while (true) {
        Eigen::VectorXi cand = residue - k_int * off;
        double d = (lat.basis * cand.cast<double>()).squaredNorm();
        if (!have_best || d < best_d - 1e-9 ||
            (std::abs(d - best_d) <= 1e-9 && lex_less(off, best_off))) {
            best_d = have_best ? std::min(best_d, d) : d;
            best = cand;
            best_off = off;
            have_best = true;
        }
        int i = 0;
        for (; i < n; ++i) {
            if (off[i] < radius) {
                ++off[i];
                break;
            }
            off[i] = -radius;
        }
        if (i == n) break;
    }
    return best;
}

} // namespace

Eigen::VectorXi reduce_mod_coarse(const CosetTable& table, const Eigen::VectorXi& coords) {
    return table.representatives[coset_index(table, coords)].coords;
}

CosetTable enumerate_cosets(const Lattice& lat, const SimilarityMap& kappa,
                            long long max_index) {
    if (kappa.index_N > max_index)
        throw std::runtime_error("coset index exceeds the configured maximum");

    CosetTable table;
    table.lattice = lat;
    table.kappa = kappa;
    table.coarse = make_lattice(kappa.matrix * lat.basis, false);
    const Eigen::MatrixXi& K = kappa.coord_matrix;

    // Breadth-first closure from 0 over +-basis generators; cosets are
    // keyed by their exact parallelepiped residue.
    std::deque<Eigen::VectorXi> frontier;
    Eigen::VectorXi zero = Eigen::VectorXi::Zero(lat.dim);
    Eigen::VectorXi r0 = parallelepiped_residue(K, zero);
    table.index_of[key_of(r0)] = 0;
    table.representatives.push_back(
        point_from_coords(lat, voronoi_representative(lat, K, r0)));
    frontier.push_back(r0);

    while (!frontier.empty() &&
           static_cast<long long>(table.representatives.size()) < kappa.index_N) {
        Eigen::VectorXi cur = frontier.front();
        frontier.pop_front();
        for (int i = 0; i < lat.dim && static_cast<long long>(table.representatives.size()) <
                                           kappa.index_N;
             ++i) {
            for (int sgn : {+1, -1}) {
                Eigen::VectorXi nb = cur;
                nb[i] += sgn;
                Eigen::VectorXi red = parallelepiped_residue(K, nb);
                auto key = key_of(red);
                if (table.index_of.count(key)) continue;
                table.index_of[key] = static_cast<int>(table.representatives.size());
                table.representatives.push_back(
                    point_from_coords(lat, voronoi_representative(lat, K, red)));
                frontier.push_back(red);
            }
        }
    }
    if (static_cast<long long>(table.representatives.size()) != kappa.index_N)
        throw std::runtime_error("coset enumeration did not reach the expected count");
    return table;
}

int coset_index(const CosetTable& table, const Eigen::VectorXi& coords) {
    Eigen::VectorXi red = parallelepiped_residue(table.kappa.coord_matrix, coords);
    auto it = table.index_of.find(key_of(red));
    if (it == table.index_of.end())
        throw std::runtime_error("reduced point missing from coset table");
    return it->second;
}

double shortest_vector_sq(const Eigen::MatrixXd& cb) {
    const int n = static_cast<int>(cb.cols());
    // The shortest nonzero vector is no longer than the shortest basis
    // column; bound the coefficient box accordingly.
    double min_col = cb.colwise().norm().minCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cb);
    double smin = svd.singularValues().minCoeff();
    if (!(smin > 0.0)) throw std::invalid_argument("sublattice basis is singular");
    int radius = static_cast<int>(std::ceil(min_col / smin + 1e-9));

    double best = min_col * min_col;
    Eigen::VectorXi off = Eigen::VectorXi::Constant(n, -radius);
    while (true) {
        if (!off.isZero()) {
            double d = (cb * off.cast<double>()).squaredNorm();
            if (d < best) best = d;
        }
        int i = 0;
        for (; i < n; ++i) {
            if (off[i] < radius) {
                ++off[i];
                break;
            }
            off[i] = -radius;
        }
        if (i == n) break;
    }
    return best;
}

double minimal_norm(const Lattice& lat, const SimilarityMap& kappa) {
    return shortest_vector_sq(kappa.matrix * lat.basis);
}

} // namespace wzlq
