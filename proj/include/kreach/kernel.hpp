#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "kreach/error.hpp"
#include "kreach/types.hpp"

namespace kreach {

enum class KernelFamily { Abel, Gaussian };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view name);

/// Radial kernel with unit diagonal.
///
/// Abel:     K(x, y) = exp(-|x - y| / bandwidth)
/// Gaussian: K(x, y) = exp(-|x - y|^2 / (2 bandwidth^2))
///
/// Only the Abel kernel is known to be completely separating; the Gaussian
/// family is provided for experimentation without any convergence claim.
template <typename Scalar>
struct BasicKernelSpec {
  KernelFamily family = KernelFamily::Abel;
  Scalar bandwidth = Scalar(0.1);

  void validate() const {
    if (!(bandwidth > Scalar(0)) || !std::isfinite(bandwidth)) {
      throw ValidationError("kernel bandwidth must be positive and finite");
    }
  }

  friend bool operator==(const BasicKernelSpec&, const BasicKernelSpec&) = default;
};

using KernelSpec = BasicKernelSpec<double>;

template <typename Scalar>
BasicKernelSpec<Scalar> make_kernel(KernelFamily family, Scalar bandwidth) {
  BasicKernelSpec<Scalar> spec{family, bandwidth};
  spec.validate();
  return spec;
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& values, std::string_view what) {
  for (Index j = 0; j < values.cols(); ++j) {
    for (Index i = 0; i < values.rows(); ++i) {
      if (!std::isfinite(values(i, j))) {
        throw ValidationError(std::string(what) + " contains a non-finite value");
      }
    }
  }
}

namespace detail {

// Plain left-to-right sum of squares. (a - b)^2 == (b - a)^2 exactly, so the
// result does not depend on argument order.
template <typename DerivedA, typename DerivedB>
typename DerivedA::Scalar squared_distance(const Eigen::MatrixBase<DerivedA>& x,
                                           const Eigen::MatrixBase<DerivedB>& y) {
  using Scalar = typename DerivedA::Scalar;
  Scalar sum(0);
  for (Index i = 0; i < x.size(); ++i) {
    const Scalar d = x.coeff(i) - y.coeff(i);
    sum += d * d;
  }
  return sum;
}

template <typename Scalar>
Scalar kernel_from_squared_distance(const BasicKernelSpec<Scalar>& spec, Scalar sq) {
  switch (spec.family) {
    case KernelFamily::Abel:
      return std::exp(-std::sqrt(sq) / spec.bandwidth);
    case KernelFamily::Gaussian:
      return std::exp(-sq / (Scalar(2) * spec.bandwidth * spec.bandwidth));
  }
  return Scalar(0);
}

/// Unchecked kernel value; callers validate dimensions and finiteness.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar kernel_value(const BasicKernelSpec<Scalar>& spec, const Eigen::MatrixBase<DerivedA>& x,
                    const Eigen::MatrixBase<DerivedB>& y) {
  return kernel_from_squared_distance(spec, squared_distance(x, y));
}

template <typename DerivedA, typename DerivedB>
void check_pair(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) {
  if (x.size() != y.size()) {
    throw ValidationError("kernel arguments differ in dimension (" + std::to_string(x.size()) +
                          " vs " + std::to_string(y.size()) + ")");
  }
  require_finite(x, "kernel argument");
  require_finite(y, "kernel argument");
}

}  // namespace detail

/// K(x, y) for vectors of equal dimension. Symmetric bit-for-bit.
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar kernel_eval(const BasicKernelSpec<Scalar>& spec, const Eigen::MatrixBase<DerivedA>& x,
                   const Eigen::MatrixBase<DerivedB>& y) {
  spec.validate();
  detail::check_pair(x, y);
  return detail::kernel_value(spec, x, y);
}

/// Kernel-induced metric sqrt(K(x,x) + K(y,y) - 2 K(x,y)) = sqrt(2 - 2 K(x,y)).
template <typename Scalar, typename DerivedA, typename DerivedB>
Scalar kernel_metric(const BasicKernelSpec<Scalar>& spec, const Eigen::MatrixBase<DerivedA>& x,
                     const Eigen::MatrixBase<DerivedB>& y) {
  const Scalar k = kernel_eval(spec, x, y);
  return std::sqrt(std::max(Scalar(0), Scalar(2) - Scalar(2) * k));
}

/// Gram matrix of the rows of `points`. The upper triangle is computed and
/// mirrored, so the result is exactly symmetric with an exact unit diagonal.
template <typename Scalar, typename Derived>
MatrixX<Scalar> gram(const BasicKernelSpec<Scalar>& spec, const Eigen::MatrixBase<Derived>& points) {
  spec.validate();
  if (points.rows() < 1) throw ValidationError("gram: empty point list");
  if (points.cols() < 1) throw ValidationError("gram: points have zero dimension");
  require_finite(points, "gram points");

  const Index m = points.rows();
  MatrixX<Scalar> g(m, m);
  for (Index j = 0; j < m; ++j) {
    g(j, j) = Scalar(1);
    for (Index i = 0; i < j; ++i) {
      const Scalar k = detail::kernel_value(spec, points.row(i), points.row(j));
      g(i, j) = k;
      g(j, i) = k;
    }
  }
  return g;
}

}  // namespace kreach
