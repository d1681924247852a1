#include "blz/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace blz {

VelocityGrid::VelocityGrid(int n_points_per_axis, double half_width)
    : n_(n_points_per_axis), half_width_(half_width) {
  if (n_ < 4 || n_ % 2 != 0)
    throw std::invalid_argument("VelocityGrid: N must be even and >= 4");
  if (!(half_width_ > 0.0) || !std::isfinite(half_width_))
    throw std::invalid_argument("VelocityGrid: half_width must be positive and finite");
  h_ = 2.0 * half_width_ / n_;
  dxi_ = M_PI / half_width_;
}

VelocityGrid make_grid(int n_points_per_axis, double half_width) {
  return VelocityGrid(n_points_per_axis, half_width);
}

namespace {

// One cached in-place c2c plan pair per lattice size.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t size = 0;
  ~PlanPair() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (buf) fftw_free(buf);
  }
};

PlanPair& plans_for(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<PlanPair>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& p = cache[n];
  if (!p) {
    p = std::make_unique<PlanPair>();
    p->size = static_cast<std::size_t>(n) * n * n;
    p->buf = fftw_alloc_complex(p->size);
    p->fwd = fftw_plan_dft_3d(n, n, n, p->buf, p->buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p->bwd = fftw_plan_dft_3d(n, n, n, p->buf, p->buf, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  return *p;
}

inline int dft_index(int a, int n) { return (a + n / 2) % n; }
inline double parity_sign(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

std::vector<std::complex<double>> forward_transform_complex(
    const VelocityGrid& g, const std::vector<std::complex<double>>& f) {
  const int n = g.n();
  auto& p = plans_for(n);
  for (std::size_t i = 0; i < p.size; ++i) {
    p.buf[i][0] = f[i].real();
    p.buf[i][1] = f[i].imag();
  }
  fftw_execute(p.fwd);
  const double h3 = g.spacing() * g.spacing() * g.spacing();
  std::vector<std::complex<double>> out(p.size);
  for (int a = 0; a < n; ++a) {
    const double sa = parity_sign(a - n / 2);
    for (int b = 0; b < n; ++b) {
      const double sb = sa * parity_sign(b - n / 2);
      for (int c = 0; c < n; ++c) {
        const double s = sb * parity_sign(c - n / 2) * h3;
        const std::size_t src =
            (static_cast<std::size_t>(dft_index(a, n)) * n + dft_index(b, n)) * n +
            dft_index(c, n);
        out[g.index(a, b, c)] = s * std::complex<double>(p.buf[src][0], p.buf[src][1]);
      }
    }
  }
  return out;
}

std::vector<std::complex<double>> inverse_transform_complex(
    const VelocityGrid& g, const std::vector<std::complex<double>>& F) {
  const int n = g.n();
  auto& p = plans_for(n);
  for (int a = 0; a < n; ++a) {
    const double sa = parity_sign(a - n / 2);
    for (int b = 0; b < n; ++b) {
      const double sb = sa * parity_sign(b - n / 2);
      for (int c = 0; c < n; ++c) {
        const double s = sb * parity_sign(c - n / 2);
        const std::size_t dst =
            (static_cast<std::size_t>(dft_index(a, n)) * n + dft_index(b, n)) * n +
            dft_index(c, n);
        const auto z = s * F[g.index(a, b, c)];
        p.buf[dst][0] = z.real();
        p.buf[dst][1] = z.imag();
      }
    }
  }
  fftw_execute(p.bwd);
  const double l3 = 2.0 * g.half_width();
  const double scale = 1.0 / (l3 * l3 * l3);
  std::vector<std::complex<double>> out(p.size);
  for (std::size_t i = 0; i < p.size; ++i)
    out[i] = scale * std::complex<double>(p.buf[i][0], p.buf[i][1]);
  return out;
}

Spectrum forward_transform(const Distribution& f) {
  for (double v : f.values)
    if (!std::isfinite(v))
      throw std::invalid_argument("forward_transform: non-finite field value");
  std::vector<std::complex<double>> tmp(f.values.begin(), f.values.end());
  Spectrum F(f.grid);
  F.coeff = forward_transform_complex(f.grid, tmp);
  return F;
}

Distribution inverse_transform(const Spectrum& F) {
  for (const auto& z : F.coeff)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw std::invalid_argument("inverse_transform: non-finite coefficient");
  auto tmp = inverse_transform_complex(F.grid, F.coeff);
  Distribution f(F.grid);
  for (std::size_t i = 0; i < tmp.size(); ++i) f.values[i] = tmp[i].real();
  return f;
}

double WeightSpec::evaluate(const Vec3& v) const {
  switch (kind) {
    case Kind::Unit:
      return 1.0;
    case Kind::Monomial: {
      double w = 1.0;
      for (int i = 0; i < p1; ++i) w *= v[0];
      for (int i = 0; i < p2; ++i) w *= v[1];
      for (int i = 0; i < p3; ++i) w *= v[2];
      return w;
    }
    case Kind::OnePlusAbsPow:
      return std::pow(1.0 + std::sqrt(norm2(v)), ell);
    case Kind::BracketPow:
      return std::pow(1.0 + norm2(v), 0.5 * ell);
  }
  throw std::invalid_argument("quadrature: unregistered weight descriptor");
}

double quadrature(const Distribution& f, const WeightSpec& w) {
  const auto& g = f.grid;
  const int n = g.n();
  double acc = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k, ++idx)
        acc += f.values[idx] * w.evaluate(g.velocity(i, j, k));
  const double h = g.spacing();
  return acc * h * h * h;
}

void zero_nyquist(Spectrum& F) {
  const int n = F.grid.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (a == 0 || b == 0 || c == 0) F.coeff[F.grid.index(a, b, c)] = 0.0;
}

double interpolate_periodic(const Distribution& f, const Vec3& v) {
  const auto& g = f.grid;
  const int n = g.n();
  const double L = g.half_width();
  const double h = g.spacing();
  int base[3];
  double frac[3];
  for (int d = 0; d < 3; ++d) {
    double x = (v[d] + L) / h;            // lattice coordinate
    double fl = std::floor(x);
    frac[d] = x - fl;
    long long b = static_cast<long long>(fl) % n;
    if (b < 0) b += n;
    base[d] = static_cast<int>(b);
  }
  double acc = 0.0;
  for (int di = 0; di < 2; ++di) {
    const int i = (base[0] + di) % n;
    const double wi = di ? frac[0] : 1.0 - frac[0];
    for (int dj = 0; dj < 2; ++dj) {
      const int j = (base[1] + dj) % n;
      const double wj = wi * (dj ? frac[1] : 1.0 - frac[1]);
      for (int dk = 0; dk < 2; ++dk) {
        const int k = (base[2] + dk) % n;
        acc += wj * (dk ? frac[2] : 1.0 - frac[2]) * f.values[g.index(i, j, k)];
      }
    }
  }
  return acc;
}

void lagrange6_weights(double s, double w[6]) {
  // Nodes at offsets {-2,-1,0,1,2,3}; closed forms of prod_{k!=j}(s-s_k)/(s_j-s_k).
  const double a = s + 2.0, b = s + 1.0, c = s, d = s - 1.0, e = s - 2.0,
               f = s - 3.0;
  w[0] = b * c * d * e * f / (-120.0);
  w[1] = a * c * d * e * f / 24.0;
  w[2] = a * b * d * e * f / (-12.0);
  w[3] = a * b * c * e * f / 12.0;
  w[4] = a * b * c * d * f / (-24.0);
  w[5] = a * b * c * d * e / 120.0;
}

int auto_refine_factor(int n) {
  int r = 1;
  while (r < 16 && n * r * 2 <= 144) r *= 2;
  return r;
}

TrigInterpolant::TrigInterpolant(const Distribution& f, int refine) {
  const int n = f.grid.n();
  refine_ = refine > 0 ? refine : auto_refine_factor(n);
  fine_n_ = n * refine_;
  const VelocityGrid fine = make_grid(fine_n_, f.grid.half_width());
  origin_ = -f.grid.half_width();
  inv_h_ = 1.0 / fine.spacing();
  if (refine_ == 1) {
    fine_ = f.values;
    return;
  }
  const Spectrum coarse = forward_transform(f);
  Spectrum padded(fine);
  const int off = (fine_n_ - n) / 2;  // wavenumber m sits at axis index m + N/2
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        padded.coeff[fine.index(a + off, b + off, c + off)] =
            coarse.coeff[f.grid.index(a, b, c)];
  fine_ = inverse_transform(padded).values;
}

double TrigInterpolant::operator()(const Vec3& v) const {
  const int n = fine_n_;
  int base[3];
  double wx[6], wy[6], wz[6];
  double* w3[3] = {wx, wy, wz};
  for (int d = 0; d < 3; ++d) {
    const double x = (v[d] - origin_) * inv_h_;
    const double fl = std::floor(x);
    lagrange6_weights(x - fl, w3[d]);
    long long b = (static_cast<long long>(fl) - 2) % n;
    if (b < 0) b += n;
    base[d] = static_cast<int>(b);
  }
  int ix[6], iy[6], iz[6];
  for (int t = 0; t < 6; ++t) {
    ix[t] = (base[0] + t) % n;
    iy[t] = (base[1] + t) % n;
    iz[t] = (base[2] + t) % n;
  }
  double acc = 0.0;
  for (int di = 0; di < 6; ++di) {
    const std::size_t row_i = static_cast<std::size_t>(ix[di]) * n;
    for (int dj = 0; dj < 6; ++dj) {
      const std::size_t row_ij = (row_i + iy[dj]) * n;
      const double wij = wx[di] * wy[dj];
      double inner = 0.0;
      for (int dk = 0; dk < 6; ++dk) inner += wz[dk] * fine_[row_ij + iz[dk]];
      acc += wij * inner;
    }
  }
  return acc;
}

}  // namespace blz
