#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <span>

#include "bssn/mesh.hpp"

namespace bssn {

/// Per-node values of a P1 function.
using NodalField = Eigen::VectorXd;

/// Symmetric sparse operator with both triangles stored.
using SparseOperator = Eigen::SparseMatrix<double>;

/// Diagonal operator in nodal coordinates (lumped mass, lumped reaction terms).
class DiagonalOperator {
 public:
  DiagonalOperator() = default;
  explicit DiagonalOperator(Eigen::VectorXd diagonal) : diag_(std::move(diagonal)) {}

  Eigen::Index dimension() const noexcept { return diag_.size(); }
  const Eigen::VectorXd& diagonal() const noexcept { return diag_; }
  double operator[](Eigen::Index i) const { return diag_[i]; }

  NodalField apply(const NodalField& v) const;

 private:
  Eigen::VectorXd diag_;
};

/// P1 stiffness of -div(D grad .) with natural boundary conditions, D constant SPD.
/// Throws ConfigError when D is not symmetric positive definite.
SparseOperator assemble_stiffness(const TriMesh& mesh, const Eigen::Matrix2d& diffusion);

/// Row-sum lumped mass: one third of the incident triangle area per node.
DiagonalOperator assemble_lumped_mass(const TriMesh& mesh);

/// Nodal quadrature of c(x) y on the mesh: diag(i) = coeff(i) * lumped(i).
DiagonalOperator assemble_reaction_diagonal(const TriMesh& mesh, const NodalField& coeff);

/// Same as above with a precomputed lumped mass.
DiagonalOperator assemble_reaction_diagonal(const DiagonalOperator& lumped, const NodalField& coeff);

/// Neumann load vector: trapezoidal boundary mass applied to nodal samples of g.
NodalField assemble_boundary_load(const TriMesh& mesh, const std::function<double(const Point&)>& g);

double lumped_inner(const DiagonalOperator& lumped, const NodalField& f, const NodalField& g);
double lumped_norm(const DiagonalOperator& lumped, const NodalField& f);

/// Discrete Lebesgue measure of a node set (sum of lumped weights).
double measure_of(const DiagonalOperator& lumped, std::span<const std::size_t> nodes);

}  // namespace bssn
