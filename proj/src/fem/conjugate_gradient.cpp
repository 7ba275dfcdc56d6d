#include "psg/fem/conjugate_gradient.hpp"

#include <cmath>
#include <sstream>

namespace psg::fem {

namespace {

void zero_fixed(Eigen::VectorXd& v, std::span<const std::uint8_t> fixed) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (fixed[static_cast<std::size_t>(i)]) v[i] = 0.0;
  }
}

Eigen::VectorXd free_residual(const SparseOperator& K, const Eigen::VectorXd& b,
                              std::span<const std::uint8_t> fixed, const Eigen::VectorXd& x) {
  Eigen::VectorXd r = b - K.apply(x);
  zero_fixed(r, fixed);
  return r;
}

}  // namespace

CgReport conjugate_gradient(const SparseOperator& K, const Eigen::VectorXd& b,
                            std::span<const std::uint8_t> fixed, Eigen::VectorXd& x,
                            const CgOptions& options) {
  const Eigen::Index n = K.dimension();
  if (b.size() != n || static_cast<Eigen::Index>(fixed.size()) != n) {
    throw std::invalid_argument("conjugate_gradient: dimension mismatch");
  }
  if (!(options.relative_tolerance > 0.0 && options.relative_tolerance < 1.0)) {
    throw std::invalid_argument("conjugate_gradient: tolerance must lie in (0, 1)");
  }
  const int cap = options.max_iterations > 0 ? options.max_iterations : static_cast<int>(10 * n);

  Eigen::VectorXd rhs = b;
  zero_fixed(rhs, fixed);
  const double rhs_norm = rhs.norm();
  if (x.size() != n) x = Eigen::VectorXd::Zero(n);
  zero_fixed(x, fixed);
  if (rhs_norm == 0.0) {
    x.setZero();
    return {0, 0.0};
  }
  const double target = options.relative_tolerance * rhs_norm;

  Eigen::VectorXd r = free_residual(K, rhs, fixed, x);
  Eigen::VectorXd p = r;
  Eigen::VectorXd Ap(n);
  double rr = r.squaredNorm();
  int it = 0;
  while (it < cap) {
    if (std::sqrt(rr) <= target) {
      // The recursive residual drifts from the true one; confirm before stopping.
      r = free_residual(K, rhs, fixed, x);
      rr = r.squaredNorm();
      if (std::sqrt(rr) <= target) break;
      p = r;
    }
    Ap.noalias() = K.matrix() * p;
    zero_fixed(Ap, fixed);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) {
      throw SolverError("conjugate_gradient: operator is not positive definite on the free rows",
                        it, std::sqrt(rr) / rhs_norm);
    }
    const double alpha = rr / pAp;
    x.noalias() += alpha * p;
    r.noalias() -= alpha * Ap;
    const double rr_next = r.squaredNorm();
    p = r + (rr_next / rr) * p;
    rr = rr_next;
    ++it;
  }
  const double rel = free_residual(K, rhs, fixed, x).norm() / rhs_norm;
  if (rel > options.relative_tolerance) {
    std::ostringstream msg;
    msg << "conjugate_gradient: no convergence after " << it << " iterations (relative residual "
        << rel << ")";
    throw SolverError(msg.str(), it, rel);
  }
  return {it, rel};
}

GridFunction solve_dirichlet(const SparseOperator& K, const Eigen::VectorXd& load, const Mesh& mesh,
                             const CgOptions& options, CgReport* report) {
  if (K.dimension() != static_cast<Eigen::Index>(mesh.num_nodes())) {
    throw std::invalid_argument("solve_dirichlet: operator does not match mesh");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(K.dimension());
  const CgReport r = conjugate_gradient(K, load, mesh.boundary_mask(), x, options);
  if (report) *report = r;
  return GridFunction(mesh, std::move(x));
}

}  // namespace psg::fem
