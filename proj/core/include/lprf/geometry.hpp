// Small fixed-size vector/matrix types, the rotation group about the third
// axis, and the uniform box grids every field in the library lives on.

#ifndef LPRF_GEOMETRY_H
#define LPRF_GEOMETRY_H

#include <array>
#include <cmath>
#include <cstdint>

namespace lprf {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  double& operator[](int i) { return (&x)[i]; }
  double operator[](int i) const { return (&x)[i]; }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double a) const { return {a * x, a * y, a * z}; }
  Vec3 operator/(double a) const { return {x / a, y / a, z / a}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double a) { x *= a; y *= a; z *= a; return *this; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double a, const Vec3& v) { return v * a; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }

// Row-major 3x3 matrix.
struct Mat3 {
  std::array<double, 9> m{};

  double& operator()(int r, int c) { return m[3 * r + c]; }
  double operator()(int r, int c) const { return m[3 * r + c]; }

  static Mat3 identity();
  Mat3 operator*(const Mat3& o) const;
  Vec3 operator*(const Vec3& v) const;
  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;
  Mat3 operator*(double a) const;
  Mat3 transpose() const;
};

double frobenius_norm(const Mat3& m);

// Rotation by angle s about the third coordinate axis.
Mat3 rotation_matrix(double s);

// Generator of the rotation family: d/ds rotation_matrix(s) = J * rotation_matrix(s).
// J has entries J(0,1) = -1, J(1,0) = 1, all else zero.
extern const Mat3 kRotationGenerator;

// Uniform N^3 lattice on the cube [-L, L)^3, node (i,j,k) at
// (-L + i h, -L + j h, -L + k h) with h = 2L/N.  Node-centered so that the
// origin is a lattice point when N is even; scalar data is stored x-fastest.
struct BoxGrid {
  int n = 0;
  double half_width = 0.0;  // L

  BoxGrid() = default;
  BoxGrid(int n_, double half_width_) : n(n_), half_width(half_width_) {}

  double spacing() const { return 2.0 * half_width / n; }
  std::int64_t size() const { return std::int64_t(n) * n * n; }
  std::int64_t index(int i, int j, int k) const {
    return (std::int64_t(k) * n + j) * n + i;
  }
  double coord(int i) const { return -half_width + spacing() * i; }
  Vec3 node(int i, int j, int k) const { return {coord(i), coord(j), coord(k)}; }
  bool operator==(const BoxGrid& o) const {
    return n == o.n && half_width == o.half_width;
  }
  bool operator!=(const BoxGrid& o) const { return !(*this == o); }
};

// Placement of a slice's lattice in physical space: the lattice of a unit
// BoxGrid, scaled isotropically and rotated about the third axis.  Physical
// point of lattice coordinate u is  scale * R(theta) * u.
struct SliceFrame {
  double scale = 1.0;
  double theta = 0.0;

  Vec3 to_physical(const Vec3& u) const { return rotation_matrix(theta) * u * scale; }
  Vec3 to_lattice(const Vec3& x) const {
    return rotation_matrix(-theta) * x / scale;
  }
  bool operator==(const SliceFrame& o) const {
    return scale == o.scale && theta == o.theta;
  }
};

}  // namespace lprf

#endif
