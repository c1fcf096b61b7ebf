#pragma once

#include "wzlq/lattice.hpp"

#include <map>
#include <vector>

namespace wzlq {

// A linear map kappa with kappa^T kappa = c I and kappa(Lambda) inside
// Lambda. It defines a geometrically similar sublattice of index
// N = c^(n/2).
struct SimilarityMap {
    Eigen::MatrixXd matrix;        // kappa in embedding coordinates
    Eigen::MatrixXi coord_matrix;  // kappa expressed in lattice coordinates
    double norm_c = 0.0;
    long long index_N = 0;
    Eigen::MatrixXd unitary_part;
};

// Validates a user-supplied kappa against a lattice and fills the derived
// fields. Throws if kappa is not a similarity or does not map Lambda into
// itself.
SimilarityMap make_similarity(const Lattice& lat, const Eigen::MatrixXd& kappa);

// Multiplication by the Eisenstein integer a + b*omega (omega = e^{2 pi i/3})
// acting on the A2 embedding; index N = a^2 - a b + b^2.
SimilarityMap eisenstein_similarity(const Lattice& a2, int a, int b);

// kappa = k * identity; index N = k^n.
SimilarityMap scaling_similarity(const Lattice& lat, int k);

// Coset representatives of Lambda / kappa(Lambda), each reduced into the
// zero Voronoi cell of the coarse lattice.
struct CosetTable {
    Lattice lattice;
    SimilarityMap kappa;
    Lattice coarse; // basis = kappa.matrix * lattice.basis
    std::vector<LatticePoint> representatives;
    // key: exact parallelepiped residue of the coset, computed in integer
    // arithmetic so boundary points always land on the same key
    std::map<std::vector<int>, int> index_of;
};

CosetTable enumerate_cosets(const Lattice& lat, const SimilarityMap& kappa,
                            long long max_index = 1000000);

// Reduce a lattice point into the zero cell of the coarse lattice: the
// stored representative of its coset, resolved through the exact residue.
Eigen::VectorXi reduce_mod_coarse(const CosetTable& table, const Eigen::VectorXi& coords);

int coset_index(const CosetTable& table, const Eigen::VectorXi& coords);

// Minimal squared norm over the nonzero vectors of kappa(Lambda), by exact
// search over a provably sufficient coefficient box.
double minimal_norm(const Lattice& lat, const SimilarityMap& kappa);

// Same search for an arbitrary sublattice generator matrix (columns are
// generators). Used to compare ideal sublattices against non-similar ones.
double shortest_vector_sq(const Eigen::MatrixXd& basis);

} // namespace wzlq
