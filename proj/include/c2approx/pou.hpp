#pragma once

#include "c2approx/moduli.hpp"

namespace c2approx {

/// Univariate kernel family in cosine-coefficient (Chebyshev) form; row j
/// holds the coefficients of u_j.
struct KernelFamily1D {
  Matrix coeffs;    // kernels x (degree+1)
  Vector centers;   // decay centers (theta for interval kernels, x for cube)
  int degree = 0;
  double eval(Index j, double argument) const;
  Index size() const { return coeffs.rows(); }
  /// Sum of all kernels at an argument (should be 1 on the reference range).
  double sum(double argument) const;
};

/// Partition of unity on [-1,1]: u_j(cos theta) integrates a normalized
/// Jackson kernel over the j-th symmetric theta-cell; degree <= 2n, decay
/// exponent ell around theta_j = j pi / n.
KernelFamily1D interval_kernels(int n, int ell);

/// Interval kernels rebinned to the uniform grid of [-b, b] (d = 1 factors of
/// the tensor construction); degree <= 2n, centers at the uniform cells.
KernelFamily1D cube_kernels(int n, double b, int ell);

/// Strip partition q_{i,j}(x, y) = u_j(f_i(x) - y) v_i(x) of a special-type
/// domain in its normalized frame; tail levels j >= n fold into j = n-1.
class StripPartition {
 public:
  StripPartition(std::shared_ptr<const SpecialDomain> G, int n, int m);

  const CellPartition& cells() const { return cells_; }
  int n() const { return n_; }
  int decay_m() const { return m_; }
  /// Declared degree bound of the q_{i,j}.
  int degree() const;

  double eval(int i, int j, const Vec2& world) const;
  double eval_hat(int i, int j, const Vec2& hat) const;
  /// sum over all (i, j); identically 1 by coefficient telescoping.
  double sum(const Vec2& world) const;
  double sum_hat(const Vec2& hat) const;
  /// Representative point omega_{i,j} of the cell I_{i,j} (world).
  Vec2 cell_point(int i, int j) const;

 private:
  CellPartition cells_;
  int n_, m_;
  KernelFamily1D u_;      // on [0, 2 alpha] through t = alpha (1 - cos theta)
  Vector u_tail_;         // summed coefficients of levels n-1 .. N-1
  KernelFamily1D v_;      // on [-bhat, bhat]
  Vector fi_g_, fi_dg_;   // f_i data at the cell centers
  double quad_m_ = 0.0;   // quadratic coefficient M of the f_i
  friend class GlobalPartition;
};

/// Tensor separating polynomial of Lemma-4.2 type: P in [0,1] on B_R[0],
/// 1 - P <= theta-level on mu I, P small off I; kernel (1 - (t/4R)^2)^k per
/// coordinate, degree 2k+1 <= n/d + 1 per coordinate.
Polynomial separating_polynomial(const Box& box_i, double mu, double R, int n,
                                 double theta_target);

/// R P1 + (1 - R) P2 at coefficient level.
Polynomial glue(const Polynomial& p1, const Polynomial& p2, const Polynomial& r_n);

/// One-dimensional polynomial step with exponentially small transition
/// residues, evaluated through the closed form of its defining Jackson-kernel
/// integral (the coefficients are never materialized; the degree is tracked).
class JacksonStep {
 public:
  /// Rising step on [lo, hi]: ~0 left of the transition [a, b], ~1 right of
  /// it, within [-exp(-E), 1 + exp(-E)] on the whole range.
  JacksonStep(double lo, double hi, double a, double b, double exponent);

  double operator()(double x) const;
  int degree() const { return degree_; }

 private:
  double kernel_mass(double from, double to) const;  // integral of J
  double log_j(double t) const;
  double lo_, hi_, theta_mid_;
  int m_ = 0, s_ = 0, degree_ = 0;
  double log_norm_ = 0.0;
};

/// Axis-aligned soft box indicator built from Jackson steps; values in
/// [0 - eps, 1 + eps] on the evaluation range, ~1 inside the inner box, decay
/// below exp(-exponent) outside the outer box.
class BoxStep {
 public:
  BoxStep(const Vec2& inner_lo, const Vec2& inner_hi, const Vec2& outer_lo,
          const Vec2& outer_hi, const Vec2& range_lo, const Vec2& range_hi,
          double exponent);
  double operator()(const Vec2& x) const;
  int degree() const;

 private:
  std::vector<JacksonStep> rising_, falling_;  // per coordinate
  std::vector<int> has_rise_, has_fall_;
};

/// Localized polynomial partition of unity on a C^2 domain: strip partitions
/// on the boundary cover and tensor cube partitions inside, glued along a
/// verified chain of overlapping pieces; centers merged to a 1/n-separated
/// set under rho_Omega.
class GlobalPartition {
 public:
  struct Options {
    int n = 8;
    int ell = 4;            // decay parameter of the piece kernels
    double lambda0 = 0.9;   // inner fraction of a chart entrusted to its piece
    double safety = 60.0;   // extra nats of step damping
    Index probe_count = 512;
  };

  GlobalPartition(const DomainC2& dom,
                  const std::vector<std::shared_ptr<const SpecialDomain>>& cover,
                  const Options& opt);

  Index kernel_count() const { return Index(centers_.size()); }
  const Vec2& kernel_center(Index k) const { return centers_[size_t(k)]; }
  double eval_kernel(Index k, const Vec2& x) const;
  /// Sum over all kernels (1 up to roundoff by construction).
  double sum(const Vec2& x) const;

  Index cluster_count() const { return Index(clusters_.size()); }
  const Vec2& cluster_center(Index c) const { return cluster_centers_[size_t(c)]; }
  double eval_cluster(Index c, const Vec2& x) const;
  int max_cluster_size() const;
  int piece_count() const { return int(pieces_.size()); }
  int declared_degree() const { return declared_degree_; }

 private:
  struct Piece {
    // exactly one of strip / cube-tensor
    std::shared_ptr<StripPartition> strip;
    // cube piece: tensor kernels over the doubled cube
    Vec2 cube_center = Vec2::Zero();
    double cube_half = 0.0;  // halfwidth of the doubled cube
    KernelFamily1D vx, vy;
    std::shared_ptr<BoxStep> step;  // absent for the first piece
    double growth_log = 0.0;
    Index first_kernel = 0, kernel_count = 0;
  };

  double piece_kernel(const Piece& pc, Index local, const Vec2& x) const;

  const DomainC2 dom_;
  Options opt_;
  std::vector<Piece> pieces_;
  std::vector<Vec2> centers_;
  std::vector<std::pair<int, Index>> kernel_of_;  // piece, local index
  std::vector<std::vector<Index>> clusters_;
  std::vector<Vec2> cluster_centers_;
  int declared_degree_ = 0;
};

}  // namespace c2approx
