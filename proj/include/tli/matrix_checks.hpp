#pragma once

#include "tli/fock_basis.hpp"

namespace tli {

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kPsdTol) {
  return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
double min_hermitian_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  Eigen::SelfAdjointEigenSolver<typename Derived::PlainObject> es(m.derived());
  return es.eigenvalues().minCoeff();
}

template <typename A, typename B>
double max_abs_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

}  // namespace tli
