// Restarted GMRES with optional left preconditioning.
#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dirprec {

struct GmresOptions {
  double tol = 1e-6;
  int restart = 80;
  int max_iterations = 500;  // total inner Arnoldi steps
};

template <class Scalar>
struct SolveReport {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  Vector x;
  int iterations = 0;  // inner Arnoldi steps
  int cycles = 0;
  bool converged = false;
  std::vector<double> residuals;  // relative (preconditioned) residual, index = iteration
  double operator_seconds = 0;    // time inside apply_A
  double precond_seconds = 0;     // time inside apply_Minv
  int operator_calls = 0;
  int precond_calls = 0;
  double final_residual() const { return residuals.empty() ? 1.0 : residuals.back(); }
};

/// Solves A x = f from x0 = 0. With a preconditioner M^-1 the method works on
/// M^-1 A x = M^-1 f and the stopping test uses the preconditioned residual.
/// Modified Gram-Schmidt Arnoldi, Givens rotations for the least-squares problem.
template <class Scalar, class ApplyA, class ApplyM>
SolveReport<Scalar> gmres(ApplyA&& apply_a, ApplyM&& apply_m,
                          const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f,
                          const GmresOptions& opt = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Clock = std::chrono::steady_clock;
  if (opt.restart < 1 || opt.max_iterations < 1 || !(opt.tol > 0))
    throw std::invalid_argument("gmres: invalid options");

  SolveReport<Scalar> rep;
  const Eigen::Index n = f.size();
  rep.x = Vector::Zero(n);

  auto timed = [](auto&& fn, const Vector& v, double& seconds, int& calls) {
    const auto t0 = Clock::now();
    Vector out = fn(v);
    seconds += std::chrono::duration<double>(Clock::now() - t0).count();
    ++calls;
    if (out.size() != v.size()) throw std::invalid_argument("gmres: operator changed dimension");
    return out;
  };
  auto op = [&](const Vector& v) { return timed(apply_a, v, rep.operator_seconds, rep.operator_calls); };
  auto pre = [&](const Vector& v) { return timed(apply_m, v, rep.precond_seconds, rep.precond_calls); };

  const Vector pf = pre(f);
  const Real beta0 = pf.norm();
  if (!std::isfinite(static_cast<double>(beta0))) throw std::runtime_error("gmres: non-finite right-hand side");
  if (beta0 == Real(0)) {
    rep.converged = true;
    rep.residuals.push_back(0.0);
    return rep;
  }
  rep.residuals.push_back(1.0);

  const int m = opt.restart;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> v(n, m + 1);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> h = decltype(v)::Zero(m + 1, m);
  std::vector<Scalar> cs(m), sn(m);
  Vector g(m + 1);

  Vector r = pf;  // x0 = 0
  while (rep.iterations < opt.max_iterations) {
    ++rep.cycles;
    Real beta = r.norm();
    v.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    int k = 0;
    bool done = false;
    for (; k < m && rep.iterations < opt.max_iterations; ++k) {
      Vector w = pre(op(v.col(k)));
      for (int i = 0; i <= k; ++i) {
        h(i, k) = v.col(i).dot(w);  // conjugates the first argument
        w -= h(i, k) * v.col(i);
      }
      const Real hn = w.norm();
      h(k + 1, k) = hn;
      if (!std::isfinite(static_cast<double>(hn))) throw std::runtime_error("gmres: non-finite Krylov vector");
      const bool breakdown = hn <= Real(1e-14) * beta0;
      if (!breakdown) v.col(k + 1) = w / hn;
      for (int i = 0; i < k; ++i) {
        const Scalar t = cs[i] * h(i, k) + sn[i] * h(i + 1, k);
        h(i + 1, k) = -Eigen::numext::conj(sn[i]) * h(i, k) + cs[i] * h(i + 1, k);
        h(i, k) = t;
      }
      const Real a = std::abs(h(k, k)), b = std::abs(h(k + 1, k));
      const Real rho = std::hypot(a, b);
      if (rho == Real(0)) throw std::runtime_error("gmres: singular Hessenberg matrix");
      const Scalar phase = a == Real(0) ? Scalar(1) : h(k, k) / a;
      cs[k] = Scalar(a / rho);
      sn[k] = phase * Eigen::numext::conj(h(k + 1, k)) / rho;
      h(k, k) = phase * rho;
      h(k + 1, k) = Scalar(0);
      g[k + 1] = -Eigen::numext::conj(sn[k]) * g[k];
      g[k] = cs[k] * g[k];
      ++rep.iterations;
      const double res = static_cast<double>(std::abs(g[k + 1]) / beta0);
      rep.residuals.push_back(res);
      if (res <= opt.tol || breakdown) {
        done = true;
        ++k;
        break;
      }
    }
    // x += V_k y with H_k y = g_k.
    Vector y = g.head(k);
    for (int i = k - 1; i >= 0; --i) {
      for (int j = i + 1; j < k; ++j) y[i] -= h(i, j) * y[j];
      y[i] /= h(i, i);
    }
    rep.x += v.leftCols(k) * y;
    if (done) break;
    r = pf - pre(op(rep.x));
    const double true_res = static_cast<double>(r.norm() / beta0);
    rep.residuals.back() = true_res;
    if (true_res <= opt.tol) {
      done = true;
      break;
    }
  }
  rep.converged = rep.final_residual() <= opt.tol;
  return rep;
}

/// Unpreconditioned convenience overload.
template <class Scalar, class ApplyA>
SolveReport<Scalar> gmres(ApplyA&& apply_a, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& f,
                          const GmresOptions& opt = {}) {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  return gmres<Scalar>(std::forward<ApplyA>(apply_a), [](const Vector& x) { return x; }, f, opt);
}

}  // namespace dirprec
