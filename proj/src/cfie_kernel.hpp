// Row kernels of the matrix-free CFIE product. Compiled with vector math
// enabled; everything works on split real/imaginary arrays.
#pragma once

namespace dirprec::detail {

struct KernelGeometry {
  int n;
  const double* x;
  const double* y;
  const double* nx;
  const double* ny;
  const double* corr;  // log-quadrature correction by index distance
  double omega;
  double hs;  // h / 4
  double hc;  // h omega / 4
  double ls;  // lp / (4 pi)
  double lc;  // omega lp / (4 pi)
};

struct SplitVec {
  const double* re;
  const double* im;
};

struct SplitAcc {
  double* re;
  double* im;
};

/// Adds the contributions of all pairs (a, b), b > a, of the sound-soft
/// operator  D - i eta S  to y (both the row-a sum and the transposed part).
void soft_row_pass(const KernelGeometry& g, int a, double eta, SplitVec v, SplitAcc y);

/// Same pairs for the three pieces of the sound-hard operator:
/// ys += S w, ynn += S_nn v, yd += D' v (off-diagonal entries only).
void hard_row_pass(const KernelGeometry& g, int a, SplitVec w, SplitVec v, SplitAcc ys,
                   SplitAcc ynn, SplitAcc yd);

}  // namespace dirprec::detail
