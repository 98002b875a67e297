// Dense complex Galerkin matrix of the Langevin generator (and its adjoint)
// in the orthonormal Fourier x Hermite basis.
#pragma once

#include <Eigen/Dense>
#include <string>

#include "specgap/basis.hpp"
#include "specgap/model.hpp"

namespace specgap {

struct GeneratorMatrix {
    Eigen::MatrixXcd entries;
    ModelParams params;
    BasisSpec basis;
};

// Closed-form matrix elements; no quadrature. Entry (n', k'; n, k) is nonzero
// only for |n' - n| <= 1; the friction part is the real diagonal -xi n / m.
GeneratorMatrix assemble(const ModelParams& params, const Potential& pot,
                         const BasisSpec& basis);

// Conjugate transpose of the assembled matrix, cross-validated entrywise
// against a direct assembly of the adjoint operator; disagreement beyond
// 1e-12 (relative to the matrix scale) raises consistency_error.
GeneratorMatrix adjoint(const GeneratorMatrix& gen, const Potential& pot);

// Quadrature check of the Hermite ladder identities and the
// fluctuation-dissipation eigenrelation for n <= N; returns the max residual
// and throws consistency_error above 1e-8.
double hermite_ladder_check(const BasisSpec& basis, double m, double beta);

// Triplet text dump, one "n' k' n k re im" line per numerically nonzero entry,
// rows outer, columns inner.
std::string triplet_dump(const GeneratorMatrix& gen);

} // namespace specgap
