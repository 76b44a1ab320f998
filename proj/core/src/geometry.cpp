#include "lprf/geometry.hpp"

namespace lprf {

Mat3 Mat3::identity() {
  Mat3 r;
  r(0, 0) = r(1, 1) = r(2, 2) = 1.0;
  return r;
}

Mat3 Mat3::operator*(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
      r(i, j) = s;
    }
  return r;
}

Vec3 Mat3::operator*(const Vec3& v) const {
  Vec3 r;
  for (int i = 0; i < 3; ++i)
    r[i] = (*this)(i, 0) * v.x + (*this)(i, 1) * v.y + (*this)(i, 2) * v.z;
  return r;
}

Mat3 Mat3::operator+(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
  return r;
}

Mat3 Mat3::operator-(const Mat3& o) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = m[i] - o.m[i];
  return r;
}

Mat3 Mat3::operator*(double a) const {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[i] = a * m[i];
  return r;
}

Mat3 Mat3::transpose() const {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
  return r;
}

double frobenius_norm(const Mat3& m) {
  double s = 0.0;
  for (double v : m.m) s += v * v;
  return std::sqrt(s);
}

Mat3 rotation_matrix(double s) {
  Mat3 r = Mat3::identity();
  const double c = std::cos(s), sn = std::sin(s);
  r(0, 0) = c;
  r(0, 1) = -sn;
  r(1, 0) = sn;
  r(1, 1) = c;
  return r;
}

namespace {
Mat3 make_generator() {
  Mat3 j;
  j(0, 1) = -1.0;
  j(1, 0) = 1.0;
  return j;
}
}  // namespace

const Mat3 kRotationGenerator = make_generator();

}  // namespace lprf
