#pragma once

#include "psg/fem/grid_function.hpp"
#include "psg/fem/mesh.hpp"
#include "psg/fem/sparse_operator.hpp"

namespace psg::fem {

/// K_ij = sum_T a_T * |T| * grad(phi_i) . grad(phi_j), exact for P1.
/// Throws std::invalid_argument when `a` does not belong to `mesh`.
SparseOperator assemble_stiffness(const Mesh& mesh, const ElementField& a);

/// Consistent P1 mass matrix, |T|/12 * [2 1 1; 1 2 1; 1 1 2] per triangle.
SparseOperator assemble_mass(const Mesh& mesh);

}  // namespace psg::fem
