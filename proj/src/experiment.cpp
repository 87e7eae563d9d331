#include "dirprec/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dirprec {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

GmresOptions gmres_options(const RunConfig& cfg) {
  GmresOptions g;
  g.tol = cfg.tol;
  g.restart = cfg.restart;
  g.max_iterations = cfg.max_iterations;
  return g;
}

DirectionalOptions directional_options(const RunConfig& cfg) {
  DirectionalOptions d;
  d.m_c = cfg.m_c;
  d.diagonal = cfg.exact_diagonal ? DiagonalMode::exact : DiagonalMode::flat;
  d.zero_e = cfg.zero_e;
  return d;
}

PreconditionerOptions precond_options(const RunConfig& cfg) {
  PreconditionerOptions p;
  p.tau = cfg.tau;
  return p;
}

// Neumann blocks of the exact system are only available from dense storage.
Storage storage_for(const RunConfig& cfg, BoundaryCondition bc) {
  return cfg.exact_diagonal && bc == BoundaryCondition::neumann ? Storage::dense : Storage::automatic;
}

std::vector<bool> precond_paths(PrecondMode mode) {
  if (mode == PrecondMode::on) return {true};
  if (mode == PrecondMode::off) return {false};
  return {true, false};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  return out;
}

}  // namespace

std::unique_ptr<Problem> make_problem(ShapeId shape, const ShapeParams& params, int q, int p,
                                      BoundaryCondition bc, double eta_factor, Storage storage,
                                      int dense_limit) {
  auto prob = std::make_unique<Problem>(shape, params, q, p);
  prob->disc.curve = &prob->curve;
  prob->matrix = std::make_unique<CfieMatrix>(prob->disc, bc, eta_factor * prob->disc.omega,
                                              storage, dense_limit);
  return prob;
}

std::unique_ptr<PreconditionerBundle> build_preconditioner(const CfieMatrix& m, int m_l,
                                                           const DirectionalOptions& dopt,
                                                           const PreconditionerOptions& popt) {
  const auto t0 = Clock::now();
  auto bundle = std::make_unique<PreconditionerBundle>();
  bundle->segments = build_segments(m.discretization(), m_l);
  bundle->approx = std::make_unique<DirectionalApprox>(m, bundle->segments, dopt);
  bundle->precond = std::make_unique<DirectionalPreconditioner>(*bundle->approx, popt);
  bundle->setup_seconds = seconds_since(t0);
  return bundle;
}

Report solve_system(const CfieMatrix& m, const DirectionalPreconditioner* precond,
                    const Eigen::VectorXcd& f, const GmresOptions& opt) {
  auto op = [&m](const Eigen::VectorXcd& v) { return m.apply(v); };
  if (precond == nullptr) return gmres<cplx>(op, f, opt);
  return gmres<cplx>(op, [precond](const Eigen::VectorXcd& v) { return precond->apply(v); }, f, opt);
}

bool SolveResults::all_converged() const {
  return std::all_of(cases.begin(), cases.end(), [](const SolveCase& c) { return c.report.converged; });
}

SolveResults run_solve(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  SolveResults res;
  for (ShapeId shape : cfg.shapes) {
    for (BoundaryCondition bc : cfg.bcs) {
      for (int q : cfg.q) {
        auto prob = make_problem(shape, cfg.shape_params, q, cfg.p, bc, cfg.eta_factor,
                                 storage_for(cfg, bc), cfg.dense_limit);
        const RightHandSide rhs = plane_wave_rhs(prob->disc, Vec2(1.0, 0.0), bc);
        std::vector<Eigen::VectorXcd> solutions;
        for (bool pre : precond_paths(cfg.precond)) {
          std::unique_ptr<PreconditionerBundle> bundle;
          if (pre)
            bundle = build_preconditioner(*prob->matrix, cfg.m_l, directional_options(cfg),
                                          precond_options(cfg));
          SolveCase sc{shape, bc, q, prob->disc.n, prob->disc.omega, pre,
                       solve_system(*prob->matrix, bundle ? bundle->precond.get() : nullptr, rhs.f,
                                    gmres_options(cfg))};
          log << to_string(shape) << ' ' << to_string(bc) << " q=" << q << " n=" << sc.n
              << " precond=" << (pre ? "on" : "off") << " iterations=" << sc.report.iterations
              << " residual=" << sc.report.final_residual()
              << (sc.report.converged ? "" : " (not converged)") << '\n';
          solutions.push_back(sc.report.x);
          res.cases.push_back(std::move(sc));
        }
        if (solutions.size() == 2) {
          const double diff = (solutions[0] - solutions[1]).norm() / solutions[1].norm();
          res.max_path_difference = std::max(res.max_path_difference, diff);
          log << "  solution difference between paths: " << diff << '\n';
        }
      }
    }
  }
  if (!cfg.output.empty()) {
    auto out = open_output(cfg.output);
    out << "shape,bc,q,precond,iteration,residual\n";
    out << std::setprecision(17);
    for (const auto& c : res.cases)
      for (std::size_t k = 0; k < c.report.residuals.size(); ++k)
        out << to_string(c.shape) << ',' << to_string(c.bc) << ',' << c.q << ','
            << (c.preconditioned ? "on" : "off") << ',' << k << ',' << c.report.residuals[k] << '\n';
  }
  return res;
}

double VerifyResults::max_error() const {
  double e = 0;
  for (const auto& c : cases) e = std::max(e, c.error);
  return e;
}

bool VerifyResults::all_converged() const {
  return std::all_of(cases.begin(), cases.end(), [](const VerifyCase& c) { return c.converged; });
}

std::vector<Vec2> verification_ring(const Discretization& disc, int count) {
  const Vec2 c = disc.curve->interior_point();
  double rmax = 0;
  for (const auto& x : disc.points) rmax = std::max(rmax, (x - c).norm());
  const double gap = std::max(4.0 * disc.wavelength, 0.2 * disc.curve->diameter());
  const double radius = rmax + gap;
  std::vector<Vec2> ring;
  for (int k = 0; k < count; ++k) {
    const double t = 2.0 * std::numbers::pi * k / count;
    ring.push_back(c + radius * Vec2(std::cos(t), std::sin(t)));
  }
  return ring;
}

VerifyResults run_verify(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  VerifyResults res;
  for (ShapeId shape : cfg.shapes) {
    for (BoundaryCondition bc : cfg.bcs) {
      for (int q : cfg.q) {
        const auto t0 = Clock::now();
        auto prob = make_problem(shape, cfg.shape_params, q, cfg.p, bc, cfg.eta_factor,
                                 storage_for(cfg, bc), cfg.dense_limit);
        const Discretization& disc = prob->disc;
        const Vec2 x0 = prob->curve.interior_point();
        const RightHandSide rhs = point_source_rhs(disc, x0, bc);
        const std::vector<Vec2> ring = verification_ring(disc);
        Eigen::VectorXcd exact(static_cast<Eigen::Index>(ring.size()));
        for (std::size_t k = 0; k < ring.size(); ++k) exact[k] = green(disc.omega, ring[k], x0);
        const double setup = seconds_since(t0);
        for (bool pre : precond_paths(cfg.precond)) {
          const auto t1 = Clock::now();
          std::unique_ptr<PreconditionerBundle> bundle;
          if (pre)
            bundle = build_preconditioner(*prob->matrix, cfg.m_l, directional_options(cfg),
                                          precond_options(cfg));
          const Report rep = solve_system(*prob->matrix, bundle ? bundle->precond.get() : nullptr,
                                          rhs.f, gmres_options(cfg));
          const FieldResult field = evaluate_field(disc, rep.x, bc, prob->matrix->eta(), ring);
          VerifyCase vc;
          vc.shape = shape;
          vc.bc = bc;
          vc.q = q;
          vc.preconditioned = pre;
          vc.converged = rep.converged;
          vc.iterations = rep.iterations;
          vc.error = (field.values - exact).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff();
          vc.seconds = setup + seconds_since(t1);
          log << to_string(shape) << ' ' << to_string(bc) << " q=" << q << " precond="
              << (pre ? "on" : "off") << " iterations=" << rep.iterations << " error=" << vc.error
              << (field.too_close ? " (targets close to boundary)" : "") << '\n';
          res.cases.push_back(vc);
        }
      }
    }
  }
  if (!cfg.output.empty()) {
    auto out = open_output(cfg.output);
    out << "shape,bc,q,precond,iterations,error\n" << std::setprecision(17);
    for (const auto& c : res.cases)
      out << to_string(c.shape) << ',' << to_string(c.bc) << ',' << c.q << ','
          << (c.preconditioned ? "on" : "off") << ',' << c.iterations << ',' << c.error << '\n';
  }
  return res;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << std::setprecision(6) << r.omega << ',' << r.n << ',' << std::setprecision(4) << r.ts
        << ',' << r.ta << ',' << r.tm << ',' << r.np << ',' << r.nn << '\n';
  }
}

std::string split_output_path(const std::string& path, ShapeId shape, BoundaryCondition bc) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? path.substr(0, dot) : path;
  const std::string ext = has_ext ? path.substr(dot) : "";
  return stem + "_" + to_string(shape) + "_" + to_string(bc) + ext;
}

std::vector<BenchRow> run_bench(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  std::vector<BenchRow> rows;
  for (ShapeId shape : cfg.shapes) {
    for (BoundaryCondition bc : cfg.bcs) {
      for (int q : cfg.q) {
        auto prob = make_problem(shape, cfg.shape_params, q, cfg.p, bc, cfg.eta_factor,
                                 storage_for(cfg, bc), cfg.dense_limit);
        if (prob->disc.n > 140000)
          log << "warning: n = " << prob->disc.n << " is expensive with a quadratic matvec\n";
        const RightHandSide rhs = plane_wave_rhs(prob->disc, Vec2(1.0, 0.0), bc);
        BenchRow row;
        row.shape = shape;
        row.bc = bc;
        row.q = q;
        row.omega = prob->disc.omega;
        row.n = prob->disc.n;

        Eigen::VectorXcd probe = rhs.f;
        const auto tm0 = Clock::now();
        for (int k = 0; k < cfg.matvec_repeats; ++k) probe = prob->matrix->apply(probe) / probe.norm();
        row.tm = seconds_since(tm0) / cfg.matvec_repeats;

        auto bundle = build_preconditioner(*prob->matrix, cfg.m_l, directional_options(cfg),
                                           precond_options(cfg));
        row.ts = bundle->setup_seconds;
        const auto& d = bundle->precond->diagnostics();
        row.nnz_w = d.nnz_w;
        row.dim_w = d.dim_w;
        row.nnz_e = d.nnz_e;
        row.segments = bundle->segments.size();
        const Report rp = solve_system(*prob->matrix, bundle->precond.get(), rhs.f, gmres_options(cfg));
        row.np = rp.iterations;
        row.residual_p = rp.final_residual();
        row.converged_p = rp.converged;
        row.ta = rp.precond_calls > 0 ? rp.precond_seconds / rp.precond_calls : 0.0;
        bundle.reset();
        const Report rn = solve_system(*prob->matrix, nullptr, rhs.f, gmres_options(cfg));
        row.nn = rn.iterations;
        row.residual_n = rn.final_residual();
        row.converged_n = rn.converged;
        log << to_string(shape) << ' ' << to_string(bc) << " q=" << q << " n=" << row.n
            << " omega=" << row.omega << " Ts=" << row.ts << " Ta=" << row.ta << " Tm=" << row.tm
            << " np=" << row.np << " nn=" << row.nn << " segments=" << row.segments
            << " nnz(W)/dim=" << static_cast<double>(row.nnz_w) / row.dim_w
            << (row.converged_p && row.converged_n ? "" : " (not converged)") << std::endl;
        rows.push_back(row);
      }
    }
  }
  if (!cfg.output.empty()) {
    const bool split = cfg.shapes.size() * cfg.bcs.size() > 1;
    for (ShapeId shape : cfg.shapes) {
      for (BoundaryCondition bc : cfg.bcs) {
        if (!split && (shape != cfg.shapes.front() || bc != cfg.bcs.front())) continue;
        std::vector<BenchRow> subset;
        for (const auto& r : rows)
          if (r.shape == shape && r.bc == bc) subset.push_back(r);
        auto out = open_output(split ? split_output_path(cfg.output, shape, bc) : cfg.output);
        write_bench_csv(subset, out);
      }
    }
  }
  return rows;
}

std::vector<AblateRow> run_ablate(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  struct Variant {
    std::string name;
    double tau;
    bool exact;
    bool zero_e;
  };
  const std::vector<Variant> variants{{"flat", cfg.tau, false, false},
                                      {"exact_diagonal", cfg.tau, true, false},
                                      {"tau2", 2.0, false, false},
                                      {"tau4", 4.0, false, false},
                                      {"tau8", 8.0, false, false},
                                      {"zero_e", cfg.tau, false, true}};
  std::vector<AblateRow> rows;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  for (ShapeId shape : cfg.shapes) {
    for (BoundaryCondition bc : cfg.bcs) {
      for (int q : cfg.q) {
        const Storage storage = bc == BoundaryCondition::neumann ? Storage::dense : Storage::automatic;
        auto prob = make_problem(shape, cfg.shape_params, q, cfg.p, bc, cfg.eta_factor, storage,
                                 cfg.dense_limit);
        const RightHandSide rhs = plane_wave_rhs(prob->disc, Vec2(1.0, 0.0), bc);
        std::vector<Eigen::VectorXcd> xs, mxs;
        for (int k = 0; k < 10; ++k) {
          Eigen::VectorXcd x(prob->disc.n);
          for (auto& v : x) v = cplx(normal(rng), normal(rng));
          mxs.push_back(prob->matrix->apply(x));
          xs.push_back(std::move(x));
        }
        for (const auto& v : variants) {
          DirectionalOptions dopt;
          dopt.m_c = cfg.m_c;
          dopt.diagonal = v.exact ? DiagonalMode::exact : DiagonalMode::flat;
          dopt.zero_e = v.zero_e;
          PreconditionerOptions popt;
          popt.tau = v.tau;
          auto bundle = build_preconditioner(*prob->matrix, cfg.m_l, dopt, popt);
          const Report rep = solve_system(*prob->matrix, bundle->precond.get(), rhs.f, gmres_options(cfg));
          std::vector<double> errs;
          for (std::size_t k = 0; k < xs.size(); ++k)
            errs.push_back((bundle->precond->apply(mxs[k]) - xs[k]).norm() / xs[k].norm());
          std::nth_element(errs.begin(), errs.begin() + errs.size() / 2, errs.end());
          AblateRow row{shape, bc, q, v.name, v.tau, v.exact, v.zero_e, rep.iterations, rep.converged,
                        errs[errs.size() / 2]};
          log << to_string(shape) << ' ' << to_string(bc) << " q=" << q << ' ' << v.name
              << " np=" << row.np << " approx_error=" << row.approx_error << std::endl;
          rows.push_back(row);
        }
      }
    }
  }
  if (!cfg.output.empty()) {
    auto out = open_output(cfg.output);
    out << "shape,bc,q,variant,tau,diagonal,zero_e,np,approx_error\n" << std::setprecision(17);
    for (const auto& r : rows)
      out << to_string(r.shape) << ',' << to_string(r.bc) << ',' << r.q << ',' << r.variant << ','
          << r.tau << ',' << (r.exact_diagonal ? "exact" : "flat") << ',' << (r.zero_e ? 1 : 0) << ','
          << r.np << ',' << r.approx_error << '\n';
  }
  return rows;
}

}  // namespace dirprec
