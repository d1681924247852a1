#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace blz {

using Vec3 = std::array<double, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm2(const Vec3& a) { return dot(a, a); }

/// Truncated periodic velocity lattice [-L,L)^3 with N points per axis and
/// its dual frequency lattice xi = (pi/L) * {-N/2, ..., N/2-1}^3.
class VelocityGrid {
 public:
  VelocityGrid() = default;
  VelocityGrid(int n_points_per_axis, double half_width);

  int n() const { return n_; }
  double half_width() const { return half_width_; }
  double spacing() const { return h_; }
  double freq_spacing() const { return dxi_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * n_ * n_; }

  // row-major index <-> per-axis indices
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
  }
  double axis_velocity(int i) const { return -half_width_ + h_ * i; }
  // frequency for the "physical order" axis index a in [0,N):
  // wavenumber m = a - N/2, xi = (pi/L) m
  double axis_frequency(int a) const { return dxi_ * (a - n_ / 2); }
  int axis_wavenumber(int a) const { return a - n_ / 2; }

  Vec3 velocity(int i, int j, int k) const {
    return {axis_velocity(i), axis_velocity(j), axis_velocity(k)};
  }
  Vec3 frequency(int a, int b, int c) const {
    return {axis_frequency(a), axis_frequency(b), axis_frequency(c)};
  }

  bool operator==(const VelocityGrid& o) const {
    return n_ == o.n_ && half_width_ == o.half_width_;
  }

 private:
  int n_ = 0;
  double half_width_ = 0.0;
  double h_ = 0.0;
  double dxi_ = 0.0;
};

/// Real-valued field on a VelocityGrid (a sampled phase-space density).
struct Distribution {
  VelocityGrid grid;
  std::vector<double> values;
  bool nonnegative = false;

  Distribution() = default;
  explicit Distribution(const VelocityGrid& g)
      : grid(g), values(g.size(), 0.0) {}
};

/// Complex Fourier coefficients on the dual lattice, stored in physical
/// order: axis index a corresponds to wavenumber a - N/2.
struct Spectrum {
  VelocityGrid grid;
  std::vector<std::complex<double>> coeff;

  Spectrum() = default;
  explicit Spectrum(const VelocityGrid& g) : grid(g), coeff(g.size(), 0.0) {}
};

VelocityGrid make_grid(int n_points_per_axis, double half_width);

// Integral-convention DFT: F(xi) = h^3 sum_v f(v) exp(-i v.xi), the discrete
// stand-in for \int f(v) e^{-i v.xi} dv.  inverse_transform is its exact
// inverse: f(v) = (2L)^{-3} sum_xi F(xi) exp(i v.xi).
Spectrum forward_transform(const Distribution& f);
Distribution inverse_transform(const Spectrum& F);

// Same transforms for complex data (used internally and by tests).
std::vector<std::complex<double>> forward_transform_complex(
    const VelocityGrid& g, const std::vector<std::complex<double>>& f);
std::vector<std::complex<double>> inverse_transform_complex(
    const VelocityGrid& g, const std::vector<std::complex<double>>& F);

/// Registered analytic quadrature weights.
struct WeightSpec {
  enum class Kind {
    Unit,          // w = 1
    Monomial,      // w = v1^p1 v2^p2 v3^p3
    OnePlusAbsPow, // w = (1+|v|)^ell
    BracketPow,    // w = <v>^ell = (1+|v|^2)^{ell/2}
  };
  Kind kind = Kind::Unit;
  int p1 = 0, p2 = 0, p3 = 0;
  double ell = 0.0;

  static WeightSpec unit() { return {}; }
  static WeightSpec monomial(int a, int b, int c) {
    WeightSpec w; w.kind = Kind::Monomial; w.p1 = a; w.p2 = b; w.p3 = c; return w;
  }
  static WeightSpec one_plus_abs(double ell) {
    WeightSpec w; w.kind = Kind::OnePlusAbsPow; w.ell = ell; return w;
  }
  static WeightSpec bracket(double ell) {
    WeightSpec w; w.kind = Kind::BracketPow; w.ell = ell; return w;
  }
  double evaluate(const Vec3& v) const;
};

/// Midpoint sum h^3 sum_v f(v) w(v).
double quadrature(const Distribution& f, const WeightSpec& w);

// Zero the unpaired Nyquist planes of a spectrum (de-aliasing hygiene after
// nonlinear assembly).
void zero_nyquist(Spectrum& F);

// Periodic trilinear interpolation of a lattice field at an arbitrary point.
double interpolate_periodic(const Distribution& f, const Vec3& v);

// Weights of 6-point (degree-5) Lagrange interpolation on a uniform stencil
// {-2,-1,0,1,2,3} at fractional offset s in [0,1) from the middle-left node.
void lagrange6_weights(double s, double w[6]);

/// Band-limited evaluation of a lattice field at off-lattice points.  The
/// spectrum is zero-padded onto a refined lattice (auto factor keeps the fine
/// axis near 128 points) and evaluated by periodic 6-point tensor-Lagrange
/// interpolation of the refined samples, so the result tracks the trig
/// interpolant -- the function the frequency-side formulas see -- instead of
/// the piecewise-linear one.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Distribution& f, int refine = 0);
  double operator()(const Vec3& v) const;
  int refine() const { return refine_; }

 private:
  int fine_n_ = 0;
  int refine_ = 1;
  double origin_ = 0.0;
  double inv_h_ = 0.0;
  std::vector<double> fine_;
};

// Largest power-of-two refinement factor (capped at 16) keeping n * factor
// within a 144-point axis budget.
int auto_refine_factor(int n);

}  // namespace blz
