// Experiment drivers behind the command-line tool.
#pragma once

#include "dirprec/cfie.hpp"
#include "dirprec/config.hpp"
#include "dirprec/directional.hpp"
#include "dirprec/gmres.hpp"
#include "dirprec/preconditioner.hpp"
#include "dirprec/segmentation.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace dirprec {

/// Curve, discretisation and system matrix for one (shape, q, bc).
/// Heap-allocated because the members refer to each other.
struct Problem {
  BoundaryCurve curve;
  Discretization disc;
  std::unique_ptr<CfieMatrix> matrix;

  Problem(ShapeId shape, const ShapeParams& params, int q, int p)
      : curve(shape, params), disc(discretize(curve, q, p)) {}
};

std::unique_ptr<Problem> make_problem(ShapeId shape, const ShapeParams& params, int q, int p,
                                      BoundaryCondition bc, double eta_factor,
                                      Storage storage = Storage::automatic, int dense_limit = 4096);

struct PreconditionerBundle {
  SegmentList segments;
  std::unique_ptr<DirectionalApprox> approx;
  std::unique_ptr<DirectionalPreconditioner> precond;
  double setup_seconds = 0;
};

std::unique_ptr<PreconditionerBundle> build_preconditioner(const CfieMatrix& m, int m_l,
                                                           const DirectionalOptions& dopt,
                                                           const PreconditionerOptions& popt);

using Report = SolveReport<cplx>;

/// GMRES on the system matrix, with or without the preconditioner.
Report solve_system(const CfieMatrix& m, const DirectionalPreconditioner* precond,
                    const Eigen::VectorXcd& f, const GmresOptions& opt);

struct SolveCase {
  ShapeId shape;
  BoundaryCondition bc;
  int q = 0;
  int n = 0;
  double omega = 0;
  bool preconditioned = false;
  Report report;
};

struct SolveResults {
  std::vector<SolveCase> cases;
  bool all_converged() const;
  /// Largest relative difference between preconditioned and plain solutions
  /// of the same system (0 if only one path ran).
  double max_path_difference = 0;
};

/// Plane wave along +x. Writes the residual histories as CSV to cfg.output.
SolveResults run_solve(const RunConfig& cfg, std::ostream& log);

struct VerifyCase {
  ShapeId shape;
  BoundaryCondition bc;
  int q = 0;
  bool preconditioned = false;
  bool converged = false;
  int iterations = 0;
  double error = 0;  // max |u - G| / max |G| on the exterior ring
  double seconds = 0;
};

struct VerifyResults {
  std::vector<VerifyCase> cases;
  double max_error() const;
  bool all_converged() const;
};

/// Ring of 64 exterior points around the interior point at distance at least
/// max(4 lambda, 0.2 diam) from the boundary.
std::vector<Vec2> verification_ring(const Discretization& disc, int count = 64);

VerifyResults run_verify(const RunConfig& cfg, std::ostream& log);

struct BenchRow {
  ShapeId shape;
  BoundaryCondition bc;
  int q = 0;
  double omega = 0;
  int n = 0;
  double ts = 0;  // preconditioner setup (s)
  double ta = 0;  // per preconditioner application (s)
  double tm = 0;  // per system matvec (s)
  int np = 0;
  int nn = 0;
  double residual_p = 0;
  double residual_n = 0;
  bool converged_p = false;
  bool converged_n = false;
  long nnz_w = 0;
  int dim_w = 0;
  long nnz_e = 0;
  int segments = 0;
};

inline constexpr const char* kBenchHeader = "omega,n,Ts,Ta,Tm,np,nn";
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

/// One row per shape, bc and q. With several (shape, bc) combinations the
/// CSV is split into <stem>_<shape>_<bc><ext>.
std::vector<BenchRow> run_bench(const RunConfig& cfg, std::ostream& log);

struct AblateRow {
  ShapeId shape;
  BoundaryCondition bc;
  int q = 0;
  std::string variant;
  double tau = 0;
  bool exact_diagonal = false;
  bool zero_e = false;
  int np = 0;
  bool converged = false;
  double approx_error = 0;  // median ||P(Mx) - x|| / ||x|| over random x
};

std::vector<AblateRow> run_ablate(const RunConfig& cfg, std::ostream& log);

/// Output path for one (shape, bc) combination.
std::string split_output_path(const std::string& path, ShapeId shape, BoundaryCondition bc);

}  // namespace dirprec
