#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "kreach/error.hpp"
#include "kreach/kernel.hpp"
#include "kreach/parallel.hpp"
#include "kreach/types.hpp"

namespace kreach {

/// M terminal states of dimension n, one per row.
template <typename Scalar>
class BasicSampleSet {
 public:
  BasicSampleSet() = default;

  explicit BasicSampleSet(PointMatrix<Scalar> points, std::string provenance = {})
      : points_(std::move(points)), provenance_(std::move(provenance)) {
    if (points_.rows() < 1) throw ValidationError("sample set is empty");
    if (points_.cols() < 1) throw ValidationError("sample set has zero dimension");
    require_finite(points_, "sample set");
  }

  const PointMatrix<Scalar>& points() const { return points_; }
  Index size() const { return points_.rows(); }
  Index dim() const { return points_.cols(); }
  const std::string& provenance() const { return provenance_; }

 private:
  PointMatrix<Scalar> points_;
  std::string provenance_;
};

using SampleSet = BasicSampleSet<double>;

/// Regularization choice: an explicit positive value, or 1/M.
class LambdaRule {
 public:
  enum class Kind { Explicit, ReciprocalM };

  static LambdaRule explicit_value(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw ValidationError("lambda must be positive and finite");
    }
    return LambdaRule(Kind::Explicit, lambda);
  }
  static LambdaRule reciprocal_m() { return LambdaRule(Kind::ReciprocalM, 0.0); }

  Kind kind() const { return kind_; }
  double value() const { return value_; }

  template <typename Scalar>
  Scalar resolve(Index sample_size) const {
    if (kind_ == Kind::ReciprocalM) return Scalar(1) / static_cast<Scalar>(sample_size);
    return static_cast<Scalar>(value_);
  }

 private:
  LambdaRule(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_ = Kind::ReciprocalM;
  double value_ = 0.0;
};

template <typename Scalar>
struct BasicFitConfig {
  BasicKernelSpec<Scalar> kernel;
  LambdaRule lambda = LambdaRule::reciprocal_m();
};

using FitConfig = BasicFitConfig<double>;

enum class Membership { Inside, Outside };

/// Slack on the membership test so that round-off never ejects a training point.
inline constexpr double kClassifySlack = 1e-12;

/// Empirical support classifier
///
///   F(x) = phi(x)^T (G + M lambda I)^{-1} phi(x),   phi_i(x) = K(x_i, x),
///
/// with estimated set {x : F(x) >= 1 - tau} and tau = 1 - min_i F(x_i).
/// Immutable after construction; all queries are safe to call concurrently.
template <typename Scalar>
class BasicSupportModel {
 public:
  using Points = PointMatrix<Scalar>;
  using Vector = VectorX<Scalar>;

  static BasicSupportModel fit(const BasicSampleSet<Scalar>& samples,
                               const BasicFitConfig<Scalar>& config) {
    config.kernel.validate();
    const Scalar lambda = config.lambda.template resolve<Scalar>(samples.size());
    BasicSupportModel model(samples.points(), config.kernel, lambda);
    model.tau_ = Scalar(1) - model.train_values_.minCoeff();
    return model;
  }

  /// Rebuilds a model from persisted parts. The factorization is recomputed;
  /// `tau` is kept as given so a save/load round trip is bit-exact.
  static BasicSupportModel restore(Points support, const BasicKernelSpec<Scalar>& kernel,
                                   Scalar lambda, Scalar tau) {
    kernel.validate();
    if (support.rows() < 1 || support.cols() < 1) throw ValidationError("empty support set");
    require_finite(support, "support points");
    BasicSupportModel model(std::move(support), kernel, lambda);
    model.tau_ = tau;
    return model;
  }

  Index size() const { return support_.rows(); }
  Index dim() const { return support_.cols(); }
  const Points& support() const { return support_; }
  const BasicKernelSpec<Scalar>& kernel() const { return kernel_; }
  Scalar lambda() const { return lambda_; }
  /// tau = 1 - min_i F(x_i).
  Scalar decision_threshold() const { return tau_; }
  /// Default membership level 1 - tau.
  Scalar default_level() const { return Scalar(1) - tau_; }
  /// Lower-triangular L with L L^T = G + M lambda I.
  const MatrixX<Scalar>& factor() const { return factor_; }
  /// F evaluated at each training point.
  const Vector& train_values() const { return train_values_; }

  template <typename Derived>
  Scalar decision_value(const Eigen::MatrixBase<Derived>& x) const {
    check_query(x);
    Scalar value;
    evaluate_block(x.derived(), /*as_rows=*/false, 0, 1, &value);
    return value;
  }

  /// F at every row of `points`. Each entry is bit-identical to decision_value
  /// on that row, independent of batching and threading.
  template <typename Derived>
  Vector decision_values(const Eigen::MatrixBase<Derived>& points) const {
    check_points(points);
    Vector out(points.rows());
    const Points rows = points;
    detail::parallel_chunks(rows.rows(), kBlock, [&](Index begin, Index end) {
      evaluate_block(rows, /*as_rows=*/true, begin, end, out.data() + begin);
    });
    return out;
  }

  /// Membership at the default level 1 - tau, or at an explicit level. Levels
  /// other than the default carry no convergence guarantee.
  template <typename Derived>
  Membership classify(const Eigen::MatrixBase<Derived>& x,
                      std::optional<Scalar> level = std::nullopt) const {
    return membership(decision_value(x), level);
  }

  template <typename Derived>
  std::vector<Membership> classify_batch(const Eigen::MatrixBase<Derived>& points,
                                         std::optional<Scalar> level = std::nullopt) const {
    if (points.rows() == 0) return {};
    const Vector values = decision_values(points);
    std::vector<Membership> out(static_cast<std::size_t>(values.size()));
    for (Index i = 0; i < values.size(); ++i) out[static_cast<std::size_t>(i)] = membership(values(i), level);
    return out;
  }

  Membership membership(Scalar value, std::optional<Scalar> level = std::nullopt) const {
    const Scalar threshold = level.value_or(default_level());
    return value >= threshold - Scalar(kClassifySlack) ? Membership::Inside : Membership::Outside;
  }

 private:
  static constexpr Index kBlock = 64;

  BasicSupportModel(Points support, const BasicKernelSpec<Scalar>& kernel, Scalar lambda)
      : support_(std::move(support)), kernel_(kernel), lambda_(lambda) {
    if (!(lambda_ > Scalar(0)) || !std::isfinite(lambda_)) {
      throw ValidationError("lambda must be positive and finite");
    }
    const Index m = support_.rows();
    MatrixX<Scalar> a = gram(kernel_, support_);
    a.diagonal().array() += static_cast<Scalar>(m) * lambda_;
    Eigen::LLT<MatrixX<Scalar>> llt(a);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("Cholesky factorization of G + M*lambda*I failed");
    }
    factor_ = llt.matrixL();

    train_values_.resize(m);
    for (Index begin = 0; begin < m; begin += kBlock) {
      const Index end = std::min(m, begin + kBlock);
      evaluate_block(support_, /*as_rows=*/true, begin, end, train_values_.data() + begin);
    }
  }

  template <typename Derived>
  void check_query(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dim()) {
      throw ValidationError("query has dimension " + std::to_string(x.size()) + ", model expects " +
                            std::to_string(dim()));
    }
    require_finite(x, "query point");
  }

  template <typename Derived>
  void check_points(const Eigen::MatrixBase<Derived>& points) const {
    if (points.rows() > 0 && points.cols() != dim()) {
      throw ValidationError("query points have dimension " + std::to_string(points.cols()) +
                            ", model expects " + std::to_string(dim()));
    }
    for (Index r = 0; r < points.rows(); ++r) {
      for (Index c = 0; c < points.cols(); ++c) {
        if (!std::isfinite(points(r, c))) {
          throw ValidationError("query row " + std::to_string(r) + " contains a non-finite value");
        }
      }
    }
  }

  // Evaluates F for queries [begin, end). With as_rows the queries are rows of
  // `queries`, otherwise `queries` is a single vector. Each query is solved as
  // an independent column of L v = phi using column-oriented forward
  // substitution, so a query's arithmetic does not depend on its block-mates.
  template <typename Derived>
  void evaluate_block(const Eigen::MatrixBase<Derived>& queries, bool as_rows, Index begin,
                      Index end, Scalar* out) const {
    const Index m = support_.rows();
    const Index q = end - begin;
    MatrixX<Scalar> v(m, q);
    for (Index c = 0; c < q; ++c) {
      for (Index i = 0; i < m; ++i) {
        v(i, c) = as_rows ? detail::kernel_value(kernel_, support_.row(i), queries.row(begin + c))
                          : detail::kernel_value(kernel_, support_.row(i), queries);
      }
    }
    for (Index j = 0; j < m; ++j) {
      const Scalar pivot = factor_(j, j);
      const Scalar* column = factor_.col(j).data();
      for (Index c = 0; c < q; ++c) {
        Scalar* vc = v.col(c).data();
        const Scalar vj = vc[j] / pivot;
        vc[j] = vj;
        for (Index i = j + 1; i < m; ++i) vc[i] -= vj * column[i];
      }
    }
    // phi^T A^{-1} phi = |L^{-1} phi|^2, nonnegative by construction.
    for (Index c = 0; c < q; ++c) {
      const Scalar* vc = v.col(c).data();
      Scalar sum(0);
      for (Index i = 0; i < m; ++i) sum += vc[i] * vc[i];
      out[c] = sum;
    }
  }

  Points support_;
  BasicKernelSpec<Scalar> kernel_;
  Scalar lambda_{};
  Scalar tau_{};
  MatrixX<Scalar> factor_;
  Vector train_values_;
};

using SupportModel = BasicSupportModel<double>;

template <typename Scalar>
BasicSupportModel<Scalar> fit(const BasicSampleSet<Scalar>& samples,
                              const BasicFitConfig<Scalar>& config) {
  return BasicSupportModel<Scalar>::fit(samples, config);
}

}  // namespace kreach
