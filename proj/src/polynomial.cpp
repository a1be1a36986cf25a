#include "c2approx/polynomial.hpp"

#include <Eigen/SVD>

#include <functional>
#include <map>
#include <mutex>
#include <sstream>

namespace c2approx {

namespace {

void enumerate_graded(int dim, int degree, std::vector<int>& out) {
  // degree-major; within a degree, first coordinate descending
  std::vector<int> alpha(dim, 0);
  for (int g = 0; g <= degree; ++g) {
    // iterate compositions of g into dim parts, first part descending
    std::function<void(int, int)> rec = [&](int pos, int rem) {
      if (pos == dim - 1) {
        alpha[pos] = rem;
        out.insert(out.end(), alpha.begin(), alpha.end());
        return;
      }
      for (int a = rem; a >= 0; --a) {
        alpha[pos] = a;
        rec(pos + 1, rem - a);
      }
    };
    rec(0, g);
  }
}

}  // namespace

GradedBasis::GradedBasis(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 1) throw std::invalid_argument("GradedBasis: dim must be >= 1");
  if (degree < 0) throw std::invalid_argument("GradedBasis: degree must be >= 0");
  enumerate_graded(dim, degree, exps_);
  radix_ = degree + 1;
  std::int64_t table = 1;
  for (int k = 0; k < dim; ++k) {
    if (table > (std::int64_t(1) << 56) / radix_)
      throw std::invalid_argument("GradedBasis: index table too large");
    table *= radix_;
  }
  pos_.assign(size_t(table), Index(-1));
  const Index n = size();
  for (Index i = 0; i < n; ++i) {
    auto a = exponent(i);
    std::int64_t key = 0;
    for (int k = dim - 1; k >= 0; --k) key = key * radix_ + a[k];
    pos_[size_t(key)] = i;
  }
}

Index GradedBasis::position(std::span<const int> alpha) const {
  std::int64_t key = 0;
  int total = 0;
  for (int k = dim_ - 1; k >= 0; --k) {
    if (alpha[k] < 0 || alpha[k] > degree_) return -1;
    total += alpha[k];
    key = key * radix_ + alpha[k];
  }
  if (total > degree_) return -1;
  return pos_[size_t(key)];
}

Index GradedBasis::dimension(int dim, int degree) {
  // C(degree + dim, dim)
  double b = 1.0;
  for (int i = 1; i <= dim; ++i) b = b * double(degree + i) / double(i);
  return Index(std::llround(b));
}

std::shared_ptr<const GradedBasis> GradedBasis::get(int dim, int degree) {
  static std::map<std::pair<int, int>, std::shared_ptr<const GradedBasis>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(dim, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto ptr = std::shared_ptr<const GradedBasis>(new GradedBasis(dim, degree));
  cache.emplace(key, ptr);
  return ptr;
}

Polynomial::Polynomial(Box box, int degree)
    : box_(std::move(box)), degree_(degree), basis_(GradedBasis::get(box_.dim(), degree)) {
  coeffs_ = Vector::Zero(basis_->size());
}

Polynomial::Polynomial(Box box, int degree, Vector coeffs)
    : box_(std::move(box)), degree_(degree), basis_(GradedBasis::get(box_.dim(), degree)) {
  if (coeffs.size() != basis_->size())
    throw std::invalid_argument("Polynomial: coefficient count mismatch");
  coeffs_ = std::move(coeffs);
}

namespace {

inline void cheb_table(double t, int degree, double* T) {
  T[0] = 1.0;
  if (degree >= 1) T[1] = t;
  for (int k = 2; k <= degree; ++k) T[k] = 2.0 * t * T[k - 1] - T[k - 2];
}

}  // namespace

double Polynomial::evaln(const Vector& x) const {
  const int d = dim();
  const int n = degree_;
  Eigen::ArrayXXd T(d, n + 1);
  for (int k = 0; k < d; ++k) {
    const double t = (x[k] - box_.center[k]) / box_.halfwidth[k];
    T(k, 0) = 1.0;
    if (n >= 1) T(k, 1) = t;
    for (int j = 2; j <= n; ++j) T(k, j) = 2.0 * t * T(k, j - 1) - T(k, j - 2);
  }
  double s = 0.0;
  const Index m = basis_->size();
  for (Index i = 0; i < m; ++i) {
    const double c = coeffs_[i];
    if (c == 0.0) continue;
    auto a = basis_->exponent(i);
    double prod = c;
    for (int k = 0; k < d; ++k) prod *= T(k, a[k]);
    s += prod;
  }
  return s;
}

double Polynomial::eval2(const Vec2& x) const {
  if (dim() != 2) throw std::invalid_argument("Polynomial: dimension mismatch");
  const int n = degree_;
  thread_local std::vector<double> Tx, Ty;
  Tx.resize(n + 1);
  Ty.resize(n + 1);
  cheb_table((x[0] - box_.center[0]) / box_.halfwidth[0], n, Tx.data());
  cheb_table((x[1] - box_.center[1]) / box_.halfwidth[1], n, Ty.data());
  double s = 0.0;
  const Index m = basis_->size();
  for (Index i = 0; i < m; ++i) {
    auto a = basis_->exponent(i);
    s += coeffs_[i] * Tx[a[0]] * Ty[a[1]];
  }
  return s;
}

Vector Polynomial::gradient(const Vector& x) const {
  Vector g(dim());
  for (int k = 0; k < dim(); ++k) g[k] = partial(k)(x);
  return g;
}

Vec2 Polynomial::gradient2(const Vec2& x) const {
  return Vec2(partial(0)(x), partial(1)(x));
}

Polynomial Polynomial::partial(int k) const {
  if (k < 0 || k >= dim()) throw std::invalid_argument("partial: bad coordinate");
  const int nd = std::max(degree_ - 1, 0);
  Polynomial out(box_, nd);
  const double scale = 1.0 / box_.halfwidth[k];
  const Index m = basis_->size();
  const auto& obasis = out.basis();
  std::vector<int> beta(dim());
  // 1-D rule: (d/dt) sum a_m T_m = sum_j b_j T_j, b_j = (2/c_j) sum_{m>j, m-j odd} m a_m
  for (Index i = 0; i < m; ++i) {
    const double a = coeffs_[i];
    if (a == 0.0) continue;
    auto al = basis_->exponent(i);
    const int mk = al[k];
    if (mk == 0) continue;
    for (int d_ = 0; d_ < dim(); ++d_) beta[d_] = al[d_];
    for (int j = mk - 1; j >= 0; j -= 2) {
      beta[k] = j;
      Index pos = obasis.position(beta);
      double w = 2.0 * mk * a * scale;
      if (j == 0) w *= 0.5;
      out.coeffs_[pos] += w;
    }
  }
  return out;
}

Polynomial Polynomial::dir_derivative(const Vector& e, int order) const {
  if (e.size() != dim()) throw std::invalid_argument("dir_derivative: dimension mismatch");
  if (order < 0) throw std::invalid_argument("dir_derivative: order must be >= 0");
  Polynomial cur = *this;
  for (int it = 0; it < order; ++it) {
    Polynomial next(cur.box(), std::max(cur.degree() - 1, 0));
    for (int k = 0; k < dim(); ++k) {
      if (e[k] == 0.0) continue;
      next = next + cur.partial(k).scaled(e[k]);
    }
    cur = next;
  }
  return cur;
}

Polynomial Polynomial::extended(int new_degree) const {
  if (new_degree < degree_) throw std::invalid_argument("extended: degree must not shrink");
  Polynomial out(box_, new_degree);
  const Index m = basis_->size();
  for (Index i = 0; i < m; ++i) {
    auto a = basis_->exponent(i);
    out.coeffs_[out.basis().position(a)] = coeffs_[i];
  }
  return out;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  if (!box_.same_as(o.box_)) throw std::invalid_argument("operator+: box mismatch");
  if (degree_ == o.degree_) {
    Polynomial out(box_, degree_, coeffs_ + o.coeffs_);
    return out;
  }
  const int nd = std::max(degree_, o.degree_);
  return extended(nd) + o.extended(nd);
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  return *this + o.scaled(-1.0);
}

Polynomial Polynomial::scaled(double a) const {
  return Polynomial(box_, degree_, coeffs_ * a);
}

Polynomial Polynomial::times(const Polynomial& o) const {
  if (!box_.same_as(o.box_)) throw std::invalid_argument("times: box mismatch");
  const int d = dim();
  Polynomial out(box_, degree_ + o.degree_);
  const auto& ob = out.basis();
  const Index ma = basis_->size(), mb = o.basis_->size();
  std::vector<int> gamma(d);
  const double w0 = std::pow(0.5, d);
  for (Index ia = 0; ia < ma; ++ia) {
    const double ca = coeffs_[ia];
    if (ca == 0.0) continue;
    auto a = basis_->exponent(ia);
    for (Index ib = 0; ib < mb; ++ib) {
      const double cb = o.coeffs_[ib];
      if (cb == 0.0) continue;
      auto b = o.basis_->exponent(ib);
      // distribute T_a T_b = 1/2 (T_{a+b} + T_{|a-b|}) per coordinate
      const double w = ca * cb * w0;
      for (int mask = 0; mask < (1 << d); ++mask) {
        for (int k = 0; k < d; ++k)
          gamma[k] = (mask & (1 << k)) ? std::abs(a[k] - b[k]) : a[k] + b[k];
        out.coeffs_[ob.position(gamma)] += w;
      }
    }
  }
  return out;
}

Polynomial Polynomial::constant(const Box& box, double value) {
  Polynomial p(box, 0);
  p.coeffs_[0] = value;
  return p;
}

Polynomial Polynomial::coordinate(const Box& box, int k) {
  Polynomial p(box, 1);
  std::vector<int> alpha(box.dim(), 0);
  p.coeffs_[p.basis().position(alpha)] = box.center[k];
  alpha[k] = 1;
  p.coeffs_[p.basis().position(alpha)] = box.halfwidth[k];
  return p;
}

Polynomial Polynomial::random(int degree, int dim, const Box& box, std::uint64_t seed) {
  Polynomial p(box, degree);
  Rng rng(seed);
  for (Index i = 0; i < p.coeffs_.size(); ++i) p.coeffs_[i] = rng.normal();
  return p;
}

std::string Polynomial::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "c2approx-polynomial 1 dim " << dim() << " degree " << degree_
     << " basis chebyshev-graded\n";
  os << "center";
  for (int k = 0; k < dim(); ++k) os << ' ' << box_.center[k];
  os << "\nhalfwidth";
  for (int k = 0; k < dim(); ++k) os << ' ' << box_.halfwidth[k];
  os << "\ncoeffs " << coeffs_.size() << '\n';
  for (Index i = 0; i < coeffs_.size(); ++i) os << coeffs_[i] << '\n';
  return os.str();
}

Polynomial Polynomial::deserialize(const std::string& text) {
  std::istringstream is(text);
  std::string tag, word;
  int version = 0, dim = 0, degree = 0;
  is >> tag >> version;
  if (tag != "c2approx-polynomial" || version != 1)
    throw std::invalid_argument("Polynomial::deserialize: bad header");
  is >> word >> dim >> word >> degree >> word >> word;
  Box box;
  box.center = Vector(dim);
  box.halfwidth = Vector(dim);
  is >> word;
  for (int k = 0; k < dim; ++k) is >> box.center[k];
  is >> word;
  for (int k = 0; k < dim; ++k) is >> box.halfwidth[k];
  Index m = 0;
  is >> word >> m;
  Vector c(m);
  for (Index i = 0; i < m; ++i) is >> c[i];
  if (!is) throw std::invalid_argument("Polynomial::deserialize: truncated input");
  return Polynomial(box, degree, std::move(c));
}

Matrix basis_matrix(const Box& box, int degree, const Matrix& points) {
  auto basis = GradedBasis::get(box.dim(), degree);
  const Index npt = points.rows();
  const Index m = basis->size();
  const int d = box.dim();
  Matrix B(npt, m);
  std::vector<double> T((degree + 1) * d);
  for (Index p = 0; p < npt; ++p) {
    for (int k = 0; k < d; ++k) {
      const double t = (points(p, k) - box.center[k]) / box.halfwidth[k];
      double* Tk = T.data() + k * (degree + 1);
      cheb_table(t, degree, Tk);
    }
    for (Index i = 0; i < m; ++i) {
      auto a = basis->exponent(i);
      double prod = 1.0;
      for (int k = 0; k < d; ++k) prod *= T[k * (degree + 1) + a[k]];
      B(p, i) = prod;
    }
  }
  return B;
}

double chebyshev_eval(const Vector& c, double t) {
  // Clenshaw
  double b1 = 0.0, b2 = 0.0;
  for (Index k = c.size() - 1; k >= 1; --k) {
    const double b0 = 2.0 * t * b1 - b2 + c[k];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + (c.size() ? c[0] : 0.0);
}

Vector chebyshev_derivative(const Vector& c) {
  const Index n = c.size();
  if (n <= 1) return Vector::Zero(1);
  Vector d = Vector::Zero(n - 1);
  for (Index j = n - 2; j >= 0; --j) {
    const double up = (j + 2 < n - 1) ? d[j + 2] : 0.0;
    d[j] = up + 2.0 * double(j + 1) * c[j + 1];
  }
  d[0] *= 0.5;
  return d;
}

Vector chebyshev_product(const Vector& a, const Vector& b) {
  Vector out = Vector::Zero(a.size() + b.size() - 1);
  for (Index i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (Index j = 0; j < b.size(); ++j) {
      const double w = 0.5 * a[i] * b[j];
      out[i + j] += w;
      out[std::abs(i - j)] += w;
    }
  }
  return out;
}

bool DirectionSet::spans(int dim, double tol) const {
  if (int(directions.size()) < dim) return false;
  Matrix M(directions.size(), dim);
  for (size_t i = 0; i < directions.size(); ++i) M.row(i) = directions[i].transpose();
  Eigen::JacobiSVD<Matrix> svd(M);
  return svd.singularValues()[dim - 1] > tol;
}

DirectionalSpace directional_space_basis(int r, const DirectionSet& dirs, int dim,
                                         const Box& box) {
  if (!dirs.spans(dim)) throw std::invalid_argument("directional_space_basis: span(E) != R^dim");
  if (r < 1) throw std::invalid_argument("directional_space_basis: r must be >= 1");
  const int big = dim * (r - 1);
  auto basis = GradedBasis::get(dim, big);
  const Index m = basis->size();
  // rows: coefficients of d_e^r b_alpha stacked over e in E
  const Index rowsz = GradedBasis::get(dim, std::max(big - r, 0))->size();
  Matrix C(rowsz * Index(dirs.directions.size()), m);
  for (Index i = 0; i < m; ++i) {
    Polynomial bi(box, big);
    bi.coeffs()[i] = 1.0;
    for (size_t e = 0; e < dirs.directions.size(); ++e) {
      Polynomial der = bi.dir_derivative(dirs.directions[e], r);
      Polynomial emb = der.extended(std::max(big - r, 0));
      C.block(Index(e) * rowsz, i, rowsz, 1) = emb.coeffs();
    }
  }
  Eigen::JacobiSVD<Matrix> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = (sv.size() ? sv[0] : 0.0) * 1e-10;
  DirectionalSpace out;
  out.r = r;
  out.dirs = dirs;
  for (Index j = 0; j < svd.matrixV().cols(); ++j) {
    const double s = j < sv.size() ? sv[j] : 0.0;
    if (s <= cutoff) {
      out.basis.emplace_back(box, big, svd.matrixV().col(j));
    }
  }
  return out;
}

double kemperman_mixed_identity_residual(const Polynomial& f,
                                         const std::vector<Vector>& xis,
                                         const Vector& x) {
  const int r = int(xis.size());
  Polynomial lhs = f;
  for (const auto& xi : xis) lhs = lhs.dir_derivative(xi, 1);
  double rhs = 0.0;
  for (int mask = 0; mask < (1 << r); ++mask) {
    Vector xiS = Vector::Zero(f.dim());
    int bits = 0;
    for (int j = 0; j < r; ++j) {
      if (mask & (1 << j)) {
        xiS -= xis[j] / double(j + 1);
        ++bits;
      }
    }
    const double sign = (bits % 2 == 0) ? 1.0 : -1.0;
    rhs += sign * f.dir_derivative(xiS, r)(x);
  }
  return std::abs(lhs(x) - rhs);
}

}  // namespace c2approx
