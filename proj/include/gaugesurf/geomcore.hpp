#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"

namespace gaugesurf {

// Symmetric bilinear forms: R^{4,1} with diag(1,1,1,1,-1), and the complex
// bilinear (not Hermitian) extension of the Euclidean product on C^3.
enum class Signature { Minkowski41, Euclidean3 };

template <int D>
constexpr Signature signature_of() {
  static_assert(D == 3 || D == 5, "supported models are C^3 and R^{4,1}");
  return D == 5 ? Signature::Minkowski41 : Signature::Euclidean3;
}

template <class S, int D>
S inner(const Vec<S, D>& u, const Vec<S, D>& v) {
  S acc = (u.array() * v.array()).sum();
  if constexpr (D == 5) acc -= S(2) * u(4) * v(4);
  return acc;
}

// Gram matrix J of the form.
template <class S, int D>
Mat<S, D> metric() {
  Mat<S, D> j = Mat<S, D>::Identity();
  if constexpr (D == 5) j(4, 4) = S(-1);
  return j;
}

// Runtime-sized vector tagged with its form, for data arriving from files.
template <class S>
struct MetricVec {
  Eigen::Matrix<S, Eigen::Dynamic, 1> coords;
  Signature signature;
};

template <class S>
S inner(const MetricVec<S>& u, const MetricVec<S>& v) {
  if (u.signature != v.signature)
    throw ContractError("inner: vectors live in different models");
  const Eigen::Index n = u.signature == Signature::Minkowski41 ? 5 : 3;
  if (u.coords.size() != n || v.coords.size() != n)
    throw ContractError("inner: dimension mismatch");
  S acc = (u.coords.array() * v.coords.array()).sum();
  if (u.signature == Signature::Minkowski41) acc -= S(2) * u.coords(4) * v.coords(4);
  return acc;
}

// Hermitian angle between the lines spanned by a and b, as sin(angle).
template <class S, int D>
double projective_distance(const Vec<S, D>& a, const Vec<S, D>& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  const Vec<S, D> ua = a / na, ub = b / nb;
  return (ub - ua.dot(ub) * ua).norm();
}

// A null line, stored as a unit representative whose first non-negligible
// coordinate is real and positive.
template <class S, int D>
class NullLine {
 public:
  static constexpr double null_tol = 1e-10;

  NullLine() = default;

  explicit NullLine(const Vec<S, D>& v) : rep_(v) {
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw GeometryError("null line: zero or non-finite representative");
    rep_ /= n;
    if (std::abs(inner(rep_, rep_)) > null_tol) throw GeometryError("null line: representative is not null");
    for (int k = 0; k < D; ++k) {
      if (std::abs(rep_(k)) > 1e-9) {
        if constexpr (is_complex_v<S>) {
          rep_ *= std::conj(rep_(k)) / std::abs(rep_(k));
        } else if (rep_(k) < 0) {
          rep_ = -rep_;
        }
        break;
      }
    }
  }

  const Vec<S, D>& rep() const { return rep_; }

  bool same_as(const NullLine& o, double tol = 1e-9) const {
    return projective_distance<S, D>(rep_, o.rep_) <= tol;
  }

 private:
  Vec<S, D> rep_ = Vec<S, D>::Zero();
};

using Point = NullLine<double, 5>;

// Matrix of Gamma^x_y(t): t on x, 1/t on y, identity on the orthogonal
// complement of span(x, y). Works for any representatives.
template <class S, int D>
Mat<S, D> gamma_matrix(const Vec<S, D>& x, const Vec<S, D>& y, S t) {
  const S xy = inner(x, y);
  const Mat<S, D> j = metric<S, D>();
  Mat<S, D> m = Mat<S, D>::Identity();
  m += ((t - S(1)) / xy) * x * (j * y).transpose();
  m += ((S(1) / t - S(1)) / xy) * y * (j * x).transpose();
  return m;
}

template <class S, int D>
class GammaMap {
 public:
  static constexpr double pair_tol = 1e-12;

  GammaMap(const NullLine<S, D>& x, const NullLine<S, D>& y, S t) : x_(x), y_(y), t_(t) {
    if (std::abs(inner(x.rep(), y.rep())) <= pair_tol)
      throw SingularPairError("gamma map: (x, y) = 0, the lines do not span a (1,1)-plane");
    if (t == S(0)) throw ParameterError("gamma map: parameter must be nonzero");
    m_ = gamma_matrix<S, D>(x.rep(), y.rep(), t);
  }

  const Mat<S, D>& matrix() const { return m_; }
  Vec<S, D> apply(const Vec<S, D>& v) const { return m_ * v; }
  NullLine<S, D> apply(const NullLine<S, D>& l) const { return NullLine<S, D>(m_ * l.rep()); }
  GammaMap inverse() const { return GammaMap(y_, x_, t_); }
  S parameter() const { return t_; }

 private:
  NullLine<S, D> x_, y_;
  S t_;
  Mat<S, D> m_;
};

// An element of O(form), checked on construction.
template <class S, int D>
class OrthMap {
 public:
  explicit OrthMap(const Mat<S, D>& m, double tol = 1e-10) : m_(m) {
    if (metric_defect() > tol) throw ContractError("orthogonal map: matrix does not preserve the form");
  }
  const Mat<S, D>& matrix() const { return m_; }
  double metric_defect() const {
    const Mat<S, D> j = metric<S, D>();
    return (m_.transpose() * j * m_ - j).cwiseAbs().maxCoeff();
  }
  bool is_special() const { return std::real(m_.determinant()) > 0; }
  OrthMap operator*(const OrthMap& o) const { return OrthMap(m_ * o.m_, 1e-8); }

 private:
  Mat<S, D> m_;
};

// Inverse of an element of O(4,1): J T^t J.
inline Mat5 orth_inverse(const Mat5& t) {
  const Mat5 j = metric<double, 5>();
  return j * t.transpose() * j;
}

// Light-cone model of R^3 u {infinity}.
inline Vec5 lift_rep(const Vec3& x) {
  const double r2 = x.squaredNorm();
  Vec5 l;
  l << x, 0.5 * (r2 - 1.0), 0.5 * (r2 + 1.0);
  return l;
}
inline Point lift(const Vec3& x) { return Point(lift_rep(x)); }
inline Point infinity_point() { return Point((Vec5() << 0, 0, 0, 1, 1).finished()); }

// Affine representative (l5 - l4 = 1) of a finite point, empty at infinity.
inline std::optional<Vec5> affine_rep(const Vec5& l, double tol = 1e-12) {
  const double s = l(4) - l(3);
  if (std::abs(s) <= tol * l.norm()) return std::nullopt;
  return Vec5(l / s);
}

inline std::optional<Vec3> project(const Vec5& l, double tol = 1e-12) {
  auto a = affine_rep(l, tol);
  if (!a) return std::nullopt;
  return Vec3(a->head<3>());
}
inline std::optional<Vec3> project(const Point& p) { return project(p.rep()); }

// Concircularity: the points span a subspace of dimension <= 2, or a
// 3-space of signature (2,1).
inline bool concircular(std::span<const Point> pts, double rank_tol = 1e-8) {
  if (pts.size() <= 2) return true;
  Eigen::Matrix<double, 5, Eigen::Dynamic> b(5, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = pts[k].rep();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > rank_tol * sv(0)) ++rank;
  if (rank <= 2) return true;
  if (rank > 3) return false;
  const Eigen::Matrix<double, 5, 3> u = svd.matrixU().leftCols<3>();
  const Eigen::Matrix3d g = u.transpose() * metric<double, 5>() * u;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(g);
  int pos = 0, neg = 0;
  for (int k = 0; k < 3; ++k) {
    if (es.eigenvalues()(k) > rank_tol) ++pos;
    if (es.eigenvalues()(k) < -rank_tol) ++neg;
  }
  return pos == 2 && neg == 1;
}

inline bool concircular(std::initializer_list<Point> pts, double rank_tol = 1e-8) {
  return concircular(std::span<const Point>(pts.begin(), pts.size()), rank_tol);
}

// Cross-ratio (x, y; z, w) = t with w = Gamma^x_y(t) z; infinite when w = x.
struct ExtendedReal {
  double value = 0.0;
  bool infinite = false;
};

inline ExtendedReal cross_ratio(const Point& x, const Point& y, const Point& z, const Point& w) {
  if (x.same_as(y) || z.same_as(x) || z.same_as(y))
    throw ContractError("cross ratio: x, y, z must be distinct");
  if (!concircular({x, y, z, w})) throw GeometryError("cross ratio: points are not concircular");
  const Vec5 &xr = x.rep(), &yr = y.rep(), &zr = z.rep(), &wr = w.rep();
  const double wx = inner(wr, xr);
  if (w.same_as(x)) return {0.0, true};
  const double zy = inner(zr, yr);
  const double a = inner(wr, yr) * inner(zr, xr) / (wx * zy);
  const double b = inner(wr, zr) * inner(xr, yr) / (wx * zy);
  return {0.5 * (1.0 + a - b), false};
}

// Reflection 2P - I in the non-degenerate subspace spanned by the columns.
inline OrthMap<double, 5> reflection(const Eigen::Matrix<double, 5, Eigen::Dynamic>& basis) {
  const Eigen::MatrixXd j = metric<double, 5>();
  const Eigen::MatrixXd g = basis.transpose() * j * basis;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  if (!lu.isInvertible() || std::abs(lu.determinant()) <= 1e-12 * std::pow(scale, g.rows()))
    throw SingularSubspaceError("reflection: subspace is degenerate");
  const Mat5 p = basis * lu.solve(basis.transpose() * j);
  return OrthMap<double, 5>(2.0 * p - Mat5::Identity(), 1e-9);
}

}  // namespace gaugesurf
