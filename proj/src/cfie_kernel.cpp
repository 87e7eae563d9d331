#include "cfie_kernel.hpp"

#include "dirprec/hankel.hpp"

#include <algorithm>
#include <cmath>

namespace dirprec::detail {

namespace {

constexpr int kChunk = 256;

struct HankelChunk {
  alignas(64) double r[kChunk];
  alignas(64) double inv_r[kChunk];
  alignas(64) double dx[kChunk];
  alignas(64) double dy[kChunk];
  alignas(64) double h0re[kChunk];
  alignas(64) double h0im[kChunk];
  alignas(64) double h1re[kChunk];
  alignas(64) double h1im[kChunk];
};

template <int Terms>
void asymptotic_chunk(double omega, int len, HankelChunk& c) {
  const AsymptoticTable& tab = asymptotic_table();
  const double amp0 = std::sqrt(2.0 / 3.14159265358979323846) * 0.70710678118654752440;
#pragma omp simd
  for (int k = 0; k < len; ++k) {
    const double arg = std::max(omega * c.r[k], kHankelAsymptoticThreshold);
    const double u = 1.0 / arg;
    const double u2 = u * u;
    double p0 = tab.p0[Terms - 1], q0 = tab.q0[Terms - 1];
    double p1 = tab.p1[Terms - 1], q1 = tab.q1[Terms - 1];
    for (int j = Terms - 2; j >= 0; --j) {
      p0 = p0 * u2 + tab.p0[j];
      q0 = q0 * u2 + tab.q0[j];
      p1 = p1 * u2 + tab.p1[j];
      q1 = q1 * u2 + tab.q1[j];
    }
    q0 *= u;
    q1 *= u;
    const double amp = amp0 * std::sqrt(u);
    const double cs = std::cos(arg);
    const double sn = std::sin(arg);
    const double a0re = amp * (cs + sn), a0im = amp * (sn - cs);
    const double a1re = amp * (sn - cs), a1im = -amp * (cs + sn);
    c.h0re[k] = a0re * p0 - a0im * q0;
    c.h0im[k] = a0re * q0 + a0im * p0;
    c.h1re[k] = a1re * p1 - a1im * q1;
    c.h1im[k] = a1re * q1 + a1im * p1;
  }
}

// Distances and H0, H1 for b = b0 .. b0+len-1 against row a.
void fill_chunk(const KernelGeometry& g, int a, int b0, int len, HankelChunk& c) {
  const double xa = g.x[a], ya = g.y[a];
  const double* xs = g.x + b0;
  const double* ys = g.y + b0;
  double rmin = 1e300;
#pragma omp simd reduction(min : rmin)
  for (int k = 0; k < len; ++k) {
    const double dx = xa - xs[k];
    const double dy = ya - ys[k];
    const double r = std::sqrt(dx * dx + dy * dy);
    c.dx[k] = dx;
    c.dy[k] = dy;
    c.r[k] = r;
    c.inv_r[k] = 1.0 / r;
    rmin = std::min(rmin, r);
  }
  // Series length by the smallest argument in the chunk (same cut-offs as
  // hankel01_asymptotic).
  const double xmin = g.omega * rmin;
  if (xmin >= 200.0) {
    asymptotic_chunk<4>(g.omega, len, c);
  } else if (xmin >= 50.0) {
    asymptotic_chunk<6>(g.omega, len, c);
  } else {
    asymptotic_chunk<8>(g.omega, len, c);
  }
  if (xmin < kHankelAsymptoticThreshold) {
    for (int k = 0; k < len; ++k) {
      const double arg = g.omega * c.r[k];
      if (arg < kHankelAsymptoticThreshold) {
        const Hankel01 h = hankel01(arg);
        c.h0re[k] = h.h0.real();
        c.h0im[k] = h.h0.imag();
        c.h1re[k] = h.h1.real();
        c.h1im[k] = h.h1.imag();
      }
    }
  }
}

}  // namespace

void soft_row_pass(const KernelGeometry& g, int a, double eta, SplitVec v, SplitAcc y) {
  HankelChunk c;
  const double nxa = g.nx[a], nya = g.ny[a];
  const double va_re = v.re[a], va_im = v.im[a];
  double sum_re = 0.0, sum_im = 0.0;
  for (int b0 = a + 1; b0 < g.n; b0 += kChunk) {
    const int len = std::min(kChunk, g.n - b0);
    fill_chunk(g, a, b0, len, c);
    const double* corr = g.corr + (b0 - a);
    const double* nxb = g.nx + b0;
    const double* nyb = g.ny + b0;
    const double* vbr = v.re + b0;
    const double* vbi = v.im + b0;
    double* ybr = y.re + b0;
    double* ybi = y.im + b0;
#pragma omp simd reduction(+ : sum_re, sum_im)
    for (int k = 0; k < len; ++k) {
      const double delta = corr[k];
      const double s_re = -delta * g.ls * c.h0re[k] - g.hs * c.h0im[k];
      const double s_im = g.hs * c.h0re[k];
      const double c_re = (-delta * g.lc * c.h1re[k] - g.hc * c.h1im[k]) * c.inv_r[k];
      const double c_im = g.hc * c.h1re[k] * c.inv_r[k];
      const double nbd = nxb[k] * c.dx[k] + nyb[k] * c.dy[k];
      const double nad = nxa * c.dx[k] + nya * c.dy[k];
      // K_ab = c nbd - i eta s,  K_ba = -c nad - i eta s
      const double kab_re = c_re * nbd + eta * s_im;
      const double kab_im = c_im * nbd - eta * s_re;
      const double kba_re = -c_re * nad + eta * s_im;
      const double kba_im = -c_im * nad - eta * s_re;
      sum_re += kab_re * vbr[k] - kab_im * vbi[k];
      sum_im += kab_re * vbi[k] + kab_im * vbr[k];
      ybr[k] += kba_re * va_re - kba_im * va_im;
      ybi[k] += kba_re * va_im + kba_im * va_re;
    }
  }
  y.re[a] += sum_re;
  y.im[a] += sum_im;
}

void hard_row_pass(const KernelGeometry& g, int a, SplitVec w, SplitVec v, SplitAcc ys,
                   SplitAcc ynn, SplitAcc yd) {
  HankelChunk c;
  const double nxa = g.nx[a], nya = g.ny[a];
  const double va_re = v.re[a], va_im = v.im[a];
  const double wa_re = w.re[a], wa_im = w.im[a];
  double s_sum_re = 0.0, s_sum_im = 0.0;
  double nn_sum_re = 0.0, nn_sum_im = 0.0;
  double d_sum_re = 0.0, d_sum_im = 0.0;
  for (int b0 = a + 1; b0 < g.n; b0 += kChunk) {
    const int len = std::min(kChunk, g.n - b0);
    fill_chunk(g, a, b0, len, c);
    const double* corr = g.corr + (b0 - a);
    const double* nxb = g.nx + b0;
    const double* nyb = g.ny + b0;
    const double* vbr = v.re + b0;
    const double* vbi = v.im + b0;
    const double* wbr = w.re + b0;
    const double* wbi = w.im + b0;
    double* ysr = ys.re + b0;
    double* ysi = ys.im + b0;
    double* ynr = ynn.re + b0;
    double* yni = ynn.im + b0;
    double* ydr = yd.re + b0;
    double* ydi = yd.im + b0;
#pragma omp simd reduction(+ : s_sum_re, s_sum_im, nn_sum_re, nn_sum_im, d_sum_re, d_sum_im)
    for (int k = 0; k < len; ++k) {
      const double delta = corr[k];
      const double s_re = -delta * g.ls * c.h0re[k] - g.hs * c.h0im[k];
      const double s_im = g.hs * c.h0re[k];
      const double c_re = (-delta * g.lc * c.h1re[k] - g.hc * c.h1im[k]) * c.inv_r[k];
      const double c_im = g.hc * c.h1re[k] * c.inv_r[k];
      const double nbd = nxb[k] * c.dx[k] + nyb[k] * c.dy[k];
      const double nad = nxa * c.dx[k] + nya * c.dy[k];
      const double nanb = nxa * nxb[k] + nya * nyb[k];
      s_sum_re += s_re * wbr[k] - s_im * wbi[k];
      s_sum_im += s_re * wbi[k] + s_im * wbr[k];
      ysr[k] += s_re * wa_re - s_im * wa_im;
      ysi[k] += s_re * wa_im + s_im * wa_re;
      const double nn_re = s_re * nanb, nn_im = s_im * nanb;
      nn_sum_re += nn_re * vbr[k] - nn_im * vbi[k];
      nn_sum_im += nn_re * vbi[k] + nn_im * vbr[k];
      ynr[k] += nn_re * va_re - nn_im * va_im;
      yni[k] += nn_re * va_im + nn_im * va_re;
      // D'_ab = -c nad,  D'_ba = c nbd
      const double dab_re = -c_re * nad, dab_im = -c_im * nad;
      const double dba_re = c_re * nbd, dba_im = c_im * nbd;
      d_sum_re += dab_re * vbr[k] - dab_im * vbi[k];
      d_sum_im += dab_re * vbi[k] + dab_im * vbr[k];
      ydr[k] += dba_re * va_re - dba_im * va_im;
      ydi[k] += dba_re * va_im + dba_im * va_re;
    }
  }
  ys.re[a] += s_sum_re;
  ys.im[a] += s_sum_im;
  ynn.re[a] += nn_sum_re;
  ynn.im[a] += nn_sum_im;
  yd.re[a] += d_sum_re;
  yd.im[a] += d_sum_im;
}

}  // namespace dirprec::detail
