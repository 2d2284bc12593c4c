#pragma once

#include "orlivar/mesh.hpp"
#include "orlivar/problem.hpp"
#include "orlivar/truncation.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <vector>

namespace orlivar {

/// Interior-node P1 stiffness matrix of the unit-coefficient Laplacian with
/// its Cholesky factorization. Used as the Riesz map that turns assembled
/// residuals into well-scaled descent directions, and as the metric for the
/// discrete eigenvalue cross-checks.
class DirichletLaplacian {
public:
    explicit DirichletLaplacian(const Mesh& mesh);

    const Mesh& mesh() const { return *mesh_; }

    /// Solves K d = r restricted to interior nodes; d has zero boundary
    /// entries. `residual` is a full nodal vector.
    std::vector<double> solve(const std::vector<double>& residual) const;

    /// Interior-node dot product.
    double dot_interior(const std::vector<double>& a, const std::vector<double>& b) const;

private:
    const Mesh* mesh_;
    Eigen::SparseMatrix<double> K_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

/// Interior-node Hessian of I (tr == nullptr) or of the truncated J at u.
/// Values of u_+ below `reaction_floor` are clamped inside the reaction term
/// so the q-2 power stays representable.
Eigen::SparseMatrix<double> assemble_hessian(const Field& u, const ProblemParams& prm,
                                             const Truncation* tr,
                                             double reaction_floor = 1e-9);

/// One Newton direction for the residual system I'(u) = 0 (or J' with tr):
/// solves H d = -r. Returns an empty vector when the factorization fails.
std::vector<double> newton_direction(const Field& u, const ProblemParams& prm,
                                     const Truncation* tr, const std::vector<double>& residual);

} // namespace orlivar
