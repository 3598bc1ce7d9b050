#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace gaugesurf {

using Complex = std::complex<double>;

template <class S, int D>
using Vec = Eigen::Matrix<S, D, 1>;
template <class S, int D>
using Mat = Eigen::Matrix<S, D, D>;

using Vec3 = Vec<double, 3>;
using Vec5 = Vec<double, 5>;
using Mat3 = Mat<double, 3>;
using Mat5 = Mat<double, 5>;
using CVec3 = Vec<Complex, 3>;
using CMat3 = Mat<Complex, 3>;

template <class S>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class S>
inline constexpr bool is_complex_v = is_complex<S>::value;

// Errors. Every failure surfaced by the library derives from Error.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct GeometryError : Error {
  using Error::Error;
};
struct SingularPairError : GeometryError {
  using GeometryError::GeometryError;
};
struct SingularSubspaceError : GeometryError {
  using GeometryError::GeometryError;
};
struct ParameterError : Error {
  using Error::Error;
};
struct NumericalDerivativeError : Error {
  using Error::Error;
};
struct NotIsothermicError : Error {
  using Error::Error;
};

// Errors that point at a grid location.
struct LocatedError : Error {
  LocatedError(const std::string& what, std::size_t where)
      : Error(what + " (at index " + std::to_string(where) + ")"), index(where) {}
  std::size_t index;
};
struct DegeneracyError : LocatedError {
  using LocatedError::LocatedError;
};
struct NotFlatError : LocatedError {
  using LocatedError::LocatedError;
};
struct PoleError : LocatedError {
  using LocatedError::LocatedError;
};
struct SingularConfigurationError : LocatedError {
  using LocatedError::LocatedError;
};

// so(3) <-> R^3, hat(v) w = v x w.
template <class S>
Mat<S, 3> hat(const Vec<S, 3>& v) {
  Mat<S, 3> m;
  m << S(0), -v(2), v(1), v(2), S(0), -v(0), -v(1), v(0), S(0);
  return m;
}

template <class S>
Vec<S, 3> vee(const Mat<S, 3>& m) {
  return Vec<S, 3>((m(2, 1) - m(1, 2)) / S(2), (m(0, 2) - m(2, 0)) / S(2),
                   (m(1, 0) - m(0, 1)) / S(2));
}

// Bilinear cross product; Eigen's cross() conjugates complex results.
template <class S>
Vec<S, 3> cross(const Vec<S, 3>& u, const Vec<S, 3>& v) {
  return Vec<S, 3>(u(1) * v(2) - u(2) * v(1), u(2) * v(0) - u(0) * v(2), u(0) * v(1) - u(1) * v(0));
}

// exp(hat(v)) for real v.
inline Mat3 rodrigues(const Vec3& v) {
  const double th = v.norm();
  const Mat3 k = hat(v);
  double a, b;
  if (th < 1e-4) {
    const double t2 = th * th;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    a = std::sin(th) / th;
    b = (1.0 - std::cos(th)) / (th * th);
  }
  return Mat3::Identity() + a * k + b * k * k;
}

// exp(z hat(v)) for real unit-free v and complex z, closed form.
inline CMat3 rodrigues(const Vec3& v, Complex z) {
  const double n = v.norm();
  const Mat3 k = hat(v);
  const Complex th = z * n;
  Complex a, b;
  if (std::abs(th) < 1e-4) {
    const Complex t2 = th * th;
    a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    b = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    a = std::sin(th) / th;
    b = (1.0 - std::cos(th)) / (th * th);
  }
  const CMat3 kc = k.cast<Complex>();
  return CMat3::Identity() + (a * z) * kc + (b * z * z) * (kc * kc);
}

// Matrix exponential: diagonal Pade(6,6) with scaling and squaring.
template <class Derived>
auto expm(const Eigen::MatrixBase<Derived>& a) {
  using M = typename Derived::PlainObject;
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  constexpr Real c[7] = {1.0,           0.5,           5.0 / 44.0,       1.0 / 66.0,
                         1.0 / 792.0,   1.0 / 15840.0, 1.0 / 665280.0};
  M x = a;
  const Real norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  if (norm > 0.5) s = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  if (s > 0) x /= std::ldexp(Real(1), s);
  const M id = M::Identity(x.rows(), x.cols());
  M p = id * c[0];
  M q = id * c[0];
  M xk = id;
  for (int k = 1; k <= 6; ++k) {
    xk = xk * x;
    p += c[k] * xk;
    q += ((k % 2) ? -c[k] : c[k]) * xk;
  }
  M r = q.partialPivLu().solve(p);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

}  // namespace gaugesurf
