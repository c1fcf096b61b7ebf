#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace wzlq {

// A full-rank lattice given by a generator matrix whose columns are the
// basis vectors. Cached inverse and smallest singular value support the
// nearest-point search.
struct Lattice {
    int dim = 0;
    Eigen::MatrixXd basis;
    Eigen::MatrixXd inv;
    double det_abs = 0.0;
    double sigma_min = 0.0; // smallest singular value of the basis
    bool det_normalized = false;
};

struct LatticePoint {
    Eigen::VectorXi coords;
    Eigen::VectorXd embedding;
};

Lattice make_lattice(const Eigen::MatrixXd& basis, bool det_normalized = false);
Lattice make_zn(int n);
// A2 basis v1=(1,0), v2=(1/2, sqrt(3)/2); optionally rescaled to unit determinant.
Lattice make_a2(bool det_normalize = false);
Lattice scale(const Lattice& lat, double s);

double voronoi_volume(const Lattice& lat);

// Nearest lattice point to x. Exact: a rounded estimate plus a bounded
// integer-offset box search whose radius is derived from the basis.
// Ties are broken toward the lexicographically smallest coordinate vector.
LatticePoint nearest_point(const Lattice& lat, const Eigen::VectorXd& x);

LatticePoint point_from_coords(const Lattice& lat, const Eigen::VectorXi& coords);

struct SecondMomentEstimate {
    double g = 0.0;
    double stderr_ = 0.0;
    long long trials = 0;
};

// Monte Carlo estimate of the normalized second moment G of the Voronoi
// cell: uniform cell samples are obtained by folding uniform samples of
// the fundamental parallelepiped through the nearest-point map.
// Trials are split over fixed substreams so the result is independent of
// any parallel execution order.
SecondMomentEstimate second_moment_mc(const Lattice& lat, long long trials, uint64_t seed);

} // namespace wzlq
