#pragma once

#include "c2approx/moduli.hpp"

namespace c2approx {

struct NnlsResult {
  Vector x;
  double residual = 0.0;
  int iterations = 0;
};

/// Lawson-Hanson active-set nonnegative least squares: min |A x - b|, x >= 0.
NnlsResult nnls(const Matrix& A, const Vector& b, double tol = 0.0,
                int max_iter = 0);

/// Integrals of the graded basis elements over the domain.
Vector moments(const DomainC2& dom, const Box& box, int n, const QuadratureRule& quad);

struct CubatureRule {
  Net net;
  std::vector<Index> support;  // net indices carrying positive weight
  Vector weights;              // one per support entry, strictly positive
  int degree = 0;
  double eps = 0.0;
  double exactness_residual = 0.0;  // relative moment residual

  double integrate(const RealFn& f) const {
    double s = 0.0;
    for (size_t k = 0; k < support.size(); ++k)
      s += weights[Index(k)] * f(net.point(support[k]));
    return s;
  }
};

/// Positive cubature exact on Pi_n over a maximal eps/n-separated net; if the
/// NNLS residual exceeds 1e-9 |m| the separation is halved and the net rebuilt
/// (at most 5 retries).
CubatureRule positive_cubature(const DomainC2& dom, int n, double eps,
                               const NodeSet& nodes, const QuadratureRule& mom_quad);

struct MzReport {
  double c1_fit = 0.0;       // min over trials of |f| / max-sum
  double c2_fit = 0.0;       // max over trials of |f| / min-sum
  Vector c1_samples;
  Vector c2_samples;
  int trials = 0;
};

MzReport mz_check(const DomainC2& dom, int n, double eps, double p, int trials,
                  std::uint64_t seed, const NodeSet& nodes,
                  const QuadratureRule& norm_quad);

struct OscReport {
  double c_fit = 0.0;  // max over trials of LHS / (eps |f|_p)
  Vector samples;
  int trials = 0;
};

OscReport osc_inequality_check(const DomainC2& dom, int n, double eps, double ell,
                               double p, int trials, std::uint64_t seed,
                               const NodeSet& nodes, const QuadratureRule& norm_quad);

}  // namespace c2approx
