#pragma once

#include "c2approx/types.hpp"

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace c2approx {

/// Axis-aligned reference box of a tensor-Chebyshev basis.
struct Box {
  Vector center;
  Vector halfwidth;

  int dim() const { return int(center.size()); }

  static Box cube(int dim, double c, double h) {
    Box b;
    b.center = Vector::Constant(dim, c);
    b.halfwidth = Vector::Constant(dim, h);
    return b;
  }
  static Box make(const Vector& center, const Vector& halfwidth) {
    Box b;
    b.center = center;
    b.halfwidth = halfwidth;
    return b;
  }
  static Box make2(const Vec2& center, const Vec2& halfwidth) {
    Box b;
    b.center = center;
    b.halfwidth = halfwidth;
    return b;
  }

  bool same_as(const Box& o, double tol = 1e-12) const {
    return dim() == o.dim() && (center - o.center).cwiseAbs().maxCoeff() <= tol &&
           (halfwidth - o.halfwidth).cwiseAbs().maxCoeff() <= tol;
  }

  /// Map a point to normalized coordinates in [-1,1]^dim.
  Vector normalize(const Vector& x) const {
    return (x - center).cwiseQuotient(halfwidth);
  }
};

/// Enumeration of the graded multi-index set {|alpha| <= degree} in a fixed
/// degree-major order.  Instances are cached and shared.
class GradedBasis {
 public:
  static std::shared_ptr<const GradedBasis> get(int dim, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  Index size() const { return Index(exps_.size()) / dim_; }

  std::span<const int> exponent(Index i) const {
    return {exps_.data() + i * dim_, size_t(dim_)};
  }
  /// Position of a multi-index, -1 if outside the set.
  Index position(std::span<const int> alpha) const;

  static Index dimension(int dim, int degree);

 private:
  GradedBasis(int dim, int degree);
  int dim_;
  int degree_;
  std::vector<int> exps_;           // packed, size() * dim_
  std::vector<Index> pos_;          // keyed by mixed-radix encoding
  std::int64_t radix_ = 0;
};

/// Element of Pi_n^dim stored as coefficients over the graded tensor-Chebyshev
/// basis scaled to a reference box.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(Box box, int degree);
  Polynomial(Box box, int degree, Vector coeffs);

  int dim() const { return box_.dim(); }
  int degree() const { return degree_; }
  const Box& box() const { return box_; }
  const Vector& coeffs() const { return coeffs_; }
  Vector& coeffs() { return coeffs_; }
  const GradedBasis& basis() const { return *basis_; }

  template <typename Derived>
  double operator()(const Eigen::MatrixBase<Derived>& x) const {
    if (dim() == 2 && x.size() == 2) return eval2(Vec2(x(0), x(1)));
    return evaln(Vector(x));
  }
  double operator()(double x, double y) const { return eval2(Vec2(x, y)); }
  double eval2(const Vec2& x) const;
  double evaln(const Vector& x) const;

  Vector gradient(const Vector& x) const;
  Vec2 gradient2(const Vec2& x) const;

  /// Coefficient-level partial derivative along coordinate k.
  Polynomial partial(int k) const;
  /// Coefficient-level (e . grad)^order; e need not be unit.
  Polynomial dir_derivative(const Vector& e, int order = 1) const;

  Polynomial extended(int new_degree) const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial scaled(double a) const;
  /// Chebyshev coefficient product; degrees add.
  Polynomial times(const Polynomial& o) const;

  static Polynomial constant(const Box& box, double value);
  static Polynomial coordinate(const Box& box, int k);
  /// i.i.d. standard normal coefficients, deterministic in seed.
  static Polynomial random(int degree, int dim, const Box& box, std::uint64_t seed);

  std::string serialize() const;
  static Polynomial deserialize(const std::string& text);

 private:
  Box box_;
  int degree_ = 0;
  Vector coeffs_;
  std::shared_ptr<const GradedBasis> basis_;
};

/// Evaluation matrix of the graded basis at a point set (rows: points).
Matrix basis_matrix(const Box& box, int degree, const Matrix& points);

/// Univariate Chebyshev series sum_k c_k T_k(t), Clenshaw evaluation.
double chebyshev_eval(const Vector& c, double t);
/// Coefficients of the derivative of a univariate Chebyshev series.
Vector chebyshev_derivative(const Vector& c);
/// Product of two univariate Chebyshev series.
Vector chebyshev_product(const Vector& a, const Vector& b);

struct DirectionSet {
  std::vector<Vector> directions;  // unit vectors
  bool spans(int dim, double tol = 1e-9) const;
};

struct DirectionalSpace {
  int r = 0;
  DirectionSet dirs;
  std::vector<Polynomial> basis;  // orthonormal span of Pi_{r-1}(E)
};

/// Basis of Pi_{r-1}(E): nullspace of Q -> (d_e^r Q)_{e in E} on
/// Pi_{(dim)(r-1)}; singular values below 1e-10 of the largest are treated
/// as zero.
DirectionalSpace directional_space_basis(int r, const DirectionSet& dirs, int dim,
                                         const Box& box);

/// |LHS - RHS| of the mixed-derivative identity
///   d_{xi_1}...d_{xi_r} = sum_{S subset {1..r}} (-1)^{|S|} d_{xi_S}^r,
/// with xi_S = -sum_{j in S} xi_j / j, evaluated at x.
double kemperman_mixed_identity_residual(const Polynomial& f,
                                         const std::vector<Vector>& xis,
                                         const Vector& x);

}  // namespace c2approx
