#include "c2approx/approx.hpp"

#include <Eigen/QR>

namespace c2approx {

namespace {

/// Modified Gram-Schmidt in place; returns the triangular factor.
Matrix mgs(Matrix& V) {
  const Index m = V.cols();
  Matrix R = Matrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index i = 0; i < j; ++i) {
      const double r = V.col(i).dot(V.col(j));
      R(i, j) = r;
      V.col(j) -= r * V.col(i);
    }
    const double nrm = V.col(j).norm();
    R(j, j) = nrm;
    if (nrm < 1e-300) throw std::runtime_error("mgs: zero column");
    V.col(j) /= nrm;
  }
  return R;
}

}  // namespace

L2Projector::L2Projector(const Box& box, int degree, const Matrix& pts,
                         const Vector& weights)
    : box_(box), degree_(degree), pts_(pts) {
  sqw_ = weights.cwiseSqrt();
  Matrix B = basis_matrix(box_, degree_, pts_);
  auto basis = GradedBasis::get(box_.dim(), degree_);
  col_degree_.resize(basis->size());
  for (Index i = 0; i < basis->size(); ++i) {
    auto a = basis->exponent(i);
    int s = 0;
    for (int k = 0; k < box_.dim(); ++k) s += a[k];
    col_degree_[i] = s;
  }
  Matrix V = sqw_.asDiagonal() * B;
  const double scale0 = V.col(0).norm();
  Matrix R1 = mgs(V);
  // condition guard: diagonal collapse of the first factor
  for (Index j = 0; j < R1.rows(); ++j) {
    if (R1(j, j) < 1e-12 * scale0)
      throw std::runtime_error("L2Projector: Gram matrix numerically rank deficient");
  }
  Matrix R2 = mgs(V);  // second pass
  Q_ = std::move(V);
  R_ = R2 * R1;
}

Vector L2Projector::onb_coefficients(const RealFn& f, Vector* fw_out) const {
  Vector fw(pts_.rows());
  for (Index i = 0; i < pts_.rows(); ++i)
    fw[i] = sqw_[i] * f(pts_.row(i).transpose());
  if (fw_out) *fw_out = fw;
  return Q_.transpose() * fw;
}

Polynomial L2Projector::from_onb(const Vector& c, int degree_cut) const {
  Vector cc = c;
  for (Index i = 0; i < cc.size(); ++i)
    if (col_degree_[i] > degree_cut) cc[i] = 0.0;
  const Vector cheb = R_.triangularView<Eigen::Upper>().solve(cc);
  return Polynomial(box_, degree_, cheb);
}

ApproxResult L2Projector::project(const RealFn& f) const {
  return project_truncated(f, degree_);
}

ApproxResult L2Projector::project_truncated(const RealFn& f, int j) const {
  Vector fw;
  Vector c = onb_coefficients(f, &fw);
  ApproxResult res;
  res.p = 2.0;
  res.approximant = from_onb(c, j);
  const Vector r = fw - Q_ * [&] {
    Vector cc = c;
    for (Index i = 0; i < cc.size(); ++i)
      if (col_degree_[i] > j) cc[i] = 0.0;
    return cc;
  }();
  res.error = r.norm();
  res.iterations = 1;
  return res;
}

Vector L2Projector::error_profile(const RealFn& f) const {
  Vector fw;
  const Vector c = onb_coefficients(f, &fw);
  const double total = fw.squaredNorm();
  Vector prof(degree_ + 1);
  Vector used = Vector::Zero(degree_ + 1);
  for (Index i = 0; i < c.size(); ++i) used[col_degree_[i]] += c[i] * c[i];
  double acc = 0.0;
  for (int j = 0; j <= degree_; ++j) {
    acc += used[j];
    prof[j] = std::sqrt(std::max(total - acc, 0.0));
  }
  return prof;
}

ApproxResult best_approx_l2(const RealFn& f, const DomainC2& dom, int n,
                            const QuadratureRule& quad) {
  const Index need = 4 * GradedBasis::dimension(2, n);
  if (quad.size() < need)
    throw std::invalid_argument("best_approx_l2: quadrature too coarse for degree");
  const double R = dom.bounding_radius();
  const Box box = Box::cube(2, 0.0, R);
  L2Projector proj(box, n, quad.nodes, quad.weights);
  return proj.project(f);
}

Matrix linf_grid(const DomainC2& dom, const QuadratureRule& quad) {
  std::vector<Vec2> extra;
  const int K = 512;
  const double per = dom.boundary_period();
  for (int i = 0; i < K; ++i) {
    const double s = per * i / K;
    const Vec2 g = dom.boundary(s);
    const Vec2 nrm = dom.outward_normal(s);
    for (double off : {1e-5, 1e-4, 1e-3, 1e-2}) {
      const Vec2 x = g - off * dom.rolling_radius() * nrm;
      if (dom.inside(x)) extra.push_back(x);
    }
  }
  Matrix grid(quad.size() + Index(extra.size()), 2);
  grid.topRows(quad.size()) = quad.nodes;
  for (size_t i = 0; i < extra.size(); ++i)
    grid.row(quad.size() + Index(i)) = extra[i].transpose();
  return grid;
}

ApproxResult best_approx_linf(const RealFn& f, const DomainC2& dom, int n,
                              const Matrix& grid, int max_iter) {
  const Index m = GradedBasis::dimension(2, n);
  if (grid.rows() < 10 * m)
    throw std::invalid_argument("best_approx_linf: grid too small for degree");
  const Box box = Box::cube(2, 0.0, dom.bounding_radius());
  const Matrix B = basis_matrix(box, n, grid);
  Vector fv(grid.rows());
  for (Index i = 0; i < grid.rows(); ++i) fv[i] = f(grid.row(i).transpose());

  Vector w = Vector::Constant(grid.rows(), 1.0 / double(grid.rows()));
  double prev_max = kInf;
  ApproxResult res;
  res.p = kInf;
  res.converged = false;
  Vector coef;
  for (int it = 0; it < max_iter; ++it) {
    const Vector sw = w.cwiseSqrt();
    Matrix V = sw.asDiagonal() * B;
    coef = V.colPivHouseholderQr().solve(sw.cwiseProduct(fv));
    const Vector r = fv - B * coef;
    const double rmax = r.cwiseAbs().maxCoeff();
    res.iterations = it + 1;
    // the weighted quadratic mean of the residual is a lower bound of the
    // discrete minimax (weights sum to one); a small gap certifies the run
    const double lower = std::sqrt(w.dot(r.cwiseAbs2()));
    if (rmax - lower <= 1e-7 * std::max(rmax, 1e-300) ||
        std::abs(prev_max - rmax) <= 1e-8 * std::max(rmax, 1e-300)) {
      res.converged = true;
      prev_max = rmax;
      break;
    }
    prev_max = rmax;
    // Lawson multiplicative update
    w = w.cwiseProduct(r.cwiseAbs());
    const double tot = w.sum();
    if (tot <= 0.0) {  // interpolation: done
      res.converged = true;
      break;
    }
    w /= tot;
    w = w.cwiseMax(1e-300);
  }
  res.approximant = Polynomial(box, n, coef);
  Vector r = fv - B * coef;
  res.error = r.cwiseAbs().maxCoeff();
  return res;
}

ApproxResult best_approx_lp(const RealFn& f, const DomainC2& dom, int n, double p,
                            const QuadratureRule& quad, int max_iter) {
  if (!(p > 1.0) || p == kInf)
    throw std::invalid_argument("best_approx_lp: p must lie in (1, inf)");
  const Box box = Box::cube(2, 0.0, dom.bounding_radius());
  const Matrix B = basis_matrix(box, n, quad.nodes);
  Vector fv(quad.size());
  for (Index i = 0; i < quad.size(); ++i) fv[i] = f(quad.node(i));

  // warm start from L2; for p > 2 the coefficient update is damped by
  // 1/(p-1), the classical stabilization of IRLS outside (1, 3)
  Vector w = quad.weights;
  Vector coef;
  const double damp = p > 2.0 ? 1.0 / (p - 1.0) : 1.0;
  double prev_err = kInf;
  ApproxResult res;
  res.p = p;
  res.converged = false;
  for (int it = 0; it < max_iter; ++it) {
    const Vector sw = w.cwiseSqrt();
    Matrix V = sw.asDiagonal() * B;
    const Vector target = V.colPivHouseholderQr().solve(sw.cwiseProduct(fv));
    coef = (it == 0) ? target : Vector(coef + damp * (target - coef));
    const Vector r = fv - B * coef;
    double err = 0.0;
    for (Index i = 0; i < r.size(); ++i)
      err += quad.weights[i] * std::pow(std::abs(r[i]), p);
    err = std::pow(err, 1.0 / p);
    res.iterations = it + 1;
    if (std::abs(prev_err - err) <= 1e-7 * std::max(err, 1e-300)) {
      res.converged = true;
      prev_err = err;
      break;
    }
    prev_err = err;
    for (Index i = 0; i < w.size(); ++i)
      w[i] = quad.weights[i] * std::max(std::pow(std::abs(r[i]), p - 2.0), 1e-10);
  }
  res.approximant = Polynomial(box, n, coef);
  res.error = prev_err;
  return res;
}

ApproxResult whitney_approx(const RealFn& f, const Matrix& pts, const Vector& weights,
                            int r, const DirectionSet& dirs, double p, const Box& box) {
  DirectionalSpace space = directional_space_basis(r, dirs, box.dim(), box);
  const Index m = Index(space.basis.size());
  Matrix B(pts.rows(), m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < pts.rows(); ++i)
      B(i, j) = space.basis[j](Vec2(pts(i, 0), pts(i, 1)));
  Vector fv(pts.rows());
  for (Index i = 0; i < pts.rows(); ++i) fv[i] = f(pts.row(i).transpose());

  ApproxResult res;
  res.p = p;
  Vector coef;
  if (p == kInf) {
    Vector w = Vector::Constant(pts.rows(), 1.0 / double(pts.rows()));
    double prev = kInf;
    for (int it = 0; it < 400; ++it) {
      const Vector sw = w.cwiseSqrt();
      Matrix V = sw.asDiagonal() * B;
      coef = V.colPivHouseholderQr().solve(sw.cwiseProduct(fv));
      const Vector resid = fv - B * coef;
      const double rmax = resid.cwiseAbs().maxCoeff();
      res.iterations = it + 1;
      if (std::abs(prev - rmax) <= 1e-9 * std::max(rmax, 1e-300)) {
        res.converged = true;
        break;
      }
      prev = rmax;
      w = w.cwiseProduct(resid.cwiseAbs());
      const double tot = w.sum();
      if (tot <= 0.0) break;
      w /= tot;
      w = w.cwiseMax(1e-300);
    }
    res.error = (fv - B * coef).cwiseAbs().maxCoeff();
  } else if (p == 2.0) {
    Vector w = weights.size() ? weights : Vector::Ones(pts.rows());
    const Vector sw = w.cwiseSqrt();
    Matrix V = sw.asDiagonal() * B;
    coef = V.colPivHouseholderQr().solve(sw.cwiseProduct(fv));
    const Vector resid = fv - B * coef;
    double err = 0.0;
    for (Index i = 0; i < resid.size(); ++i) err += w[i] * resid[i] * resid[i];
    res.error = std::sqrt(err);
    res.iterations = 1;
    res.converged = true;
  } else {
    throw std::invalid_argument("whitney_approx: p must be 2 or inf");
  }
  // assemble the approximant in the ambient polynomial space
  Polynomial acc(box, space.basis.empty() ? 0 : space.basis[0].degree());
  for (Index j = 0; j < m; ++j) acc = acc + space.basis[j].scaled(coef[j]);
  res.approximant = acc;
  return res;
}

}  // namespace c2approx
