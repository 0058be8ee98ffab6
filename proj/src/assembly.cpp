#include "bssn/assembly.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "bssn/errors.hpp"

namespace bssn {

namespace {

void require_length(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw ConfigError(std::string(what) + ": length " + std::to_string(got) + " does not match " +
                      std::to_string(want) + " nodes");
  }
}

}  // namespace

NodalField DiagonalOperator::apply(const NodalField& v) const {
  require_length(v.size(), diag_.size(), "DiagonalOperator::apply");
  return diag_.cwiseProduct(v);
}

SparseOperator assemble_stiffness(const TriMesh& mesh, const Eigen::Matrix2d& diffusion) {
  const double asym = std::abs(diffusion(0, 1) - diffusion(1, 0));
  if (asym > 1e-14 * diffusion.cwiseAbs().maxCoeff()) {
    throw ConfigError("diffusion matrix must be symmetric");
  }
  if (!(diffusion(0, 0) > 0.0) || !(diffusion.determinant() > 0.0)) {
    throw ConfigError("diffusion matrix must be positive definite");
  }

  const auto& nodes = mesh.nodes();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(9 * mesh.num_triangles());

  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tri = mesh.triangles()[t];
    const double area = mesh.signed_area(t);
    Eigen::Matrix<double, 2, 3> grads;
    for (int k = 0; k < 3; ++k) {
      const Point& p = nodes[tri[(k + 1) % 3]];
      const Point& q = nodes[tri[(k + 2) % 3]];
      grads(0, k) = (p.x2 - q.x2) / (2.0 * area);
      grads(1, k) = (q.x1 - p.x1) / (2.0 * area);
    }
    const Eigen::Matrix3d local = area * grads.transpose() * diffusion * grads;
    for (int a = 0; a < 3; ++a) {
      triplets.emplace_back(tri[a], tri[a], local(a, a));
      for (int b = a + 1; b < 3; ++b) {
        // Same value on both sides keeps the assembled matrix exactly symmetric.
        const double value = 0.5 * (local(a, b) + local(b, a));
        triplets.emplace_back(tri[a], tri[b], value);
        triplets.emplace_back(tri[b], tri[a], value);
      }
    }
  }

  const auto n = static_cast<Eigen::Index>(mesh.num_nodes());
  SparseOperator k(n, n);
  k.setFromTriplets(triplets.begin(), triplets.end());
  k.makeCompressed();
  return k;
}

DiagonalOperator assemble_lumped_mass(const TriMesh& mesh) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const double third = mesh.signed_area(t) / 3.0;
    for (std::size_t node : mesh.triangles()[t]) d[static_cast<Eigen::Index>(node)] += third;
  }
  return DiagonalOperator(std::move(d));
}

DiagonalOperator assemble_reaction_diagonal(const TriMesh& mesh, const NodalField& coeff) {
  return assemble_reaction_diagonal(assemble_lumped_mass(mesh), coeff);
}

DiagonalOperator assemble_reaction_diagonal(const DiagonalOperator& lumped, const NodalField& coeff) {
  require_length(coeff.size(), lumped.dimension(), "assemble_reaction_diagonal");
  return DiagonalOperator(lumped.diagonal().cwiseProduct(coeff));
}

NodalField assemble_boundary_load(const TriMesh& mesh, const std::function<double(const Point&)>& g) {
  NodalField load = NodalField::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  const auto& nodes = mesh.nodes();
  for (const Edge& e : mesh.boundary_edges()) {
    const Point& a = nodes[e[0]];
    const Point& b = nodes[e[1]];
    const double half = 0.5 * std::hypot(b.x1 - a.x1, b.x2 - a.x2);
    load[static_cast<Eigen::Index>(e[0])] += half * g(a);
    load[static_cast<Eigen::Index>(e[1])] += half * g(b);
  }
  return load;
}

double lumped_inner(const DiagonalOperator& lumped, const NodalField& f, const NodalField& g) {
  require_length(f.size(), lumped.dimension(), "lumped_inner");
  require_length(g.size(), lumped.dimension(), "lumped_inner");
  double sum = 0.0;
  const auto& m = lumped.diagonal();
  for (Eigen::Index i = 0; i < m.size(); ++i) sum += m[i] * f[i] * g[i];
  return sum;
}

double lumped_norm(const DiagonalOperator& lumped, const NodalField& f) {
  return std::sqrt(lumped_inner(lumped, f, f));
}

double measure_of(const DiagonalOperator& lumped, std::span<const std::size_t> nodes) {
  double sum = 0.0;
  for (std::size_t i : nodes) {
    if (i >= static_cast<std::size_t>(lumped.dimension())) {
      throw ConfigError("measure_of: node index " + std::to_string(i) + " is out of range");
    }
    sum += lumped[static_cast<Eigen::Index>(i)];
  }
  return sum;
}

}  // namespace bssn
