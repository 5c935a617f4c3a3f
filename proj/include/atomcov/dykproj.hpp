#ifndef ATOMCOV_DYKPROJ_HPP
#define ATOMCOV_DYKPROJ_HPP

#include <vector>

#include "atomcov/hermmat.hpp"
#include "atomcov/structsets.hpp"

namespace atomcov {

struct ProjSolveResult {
  HermMat e;          // returned point, exactly in the structure set
  int iterations = 0;
  double last_delta = 0.0;  // ||T_{k+1} - T_k||_F at exit
  bool converged = false;
};

/// Iteration trace row for diagnostics export: (k, delta, lambda_min(E+D)).
struct ProjTraceRow {
  int k;
  double delta;
  double lambda_min;
};

/// Dykstra's alternating projections with correction matrices. Returns the
/// nearest point to b in {block-diag, structured lower block} /\ {E+D >= 0}.
/// Stops when ||T_{k+1}-T_k||_F <= tol*(1+||b||_F) or at max_iter. The
/// returned matrix is the structure projection of the final iterate, so
/// structure membership is exact; LMI feasibility holds within the
/// convergence tolerance.
ProjSolveResult dykstra(const HermMat& b, const HermMat& d, const StructureSpec& spec,
                        double tol = 1e-8, int max_iter = 5000,
                        std::vector<ProjTraceRow>* trace = nullptr);

/// Plain alternating projections (no corrections): returns a feasible point
/// of the intersection, not necessarily the nearest one.
ProjSolveResult pocs(const HermMat& b, const HermMat& d, const StructureSpec& spec,
                     double tol = 1e-8, int max_iter = 5000,
                     std::vector<ProjTraceRow>* trace = nullptr);

/// Brute-force oracle for min ||E - b||_F^2 over the same intersection,
/// restricted to real-valued instances of total dimension r+m <= 4 with a
/// Toeplitz or banded structured block. Solves an eigenvalue-penalty
/// continuation over the free real coordinates of E and certifies the
/// result by a KKT residual <= 1e-6. Independent of dykstra/pocs.
HermMat qp_oracle_small(const HermMat& b, const HermMat& d, const StructureSpec& spec);

}  // namespace atomcov

#endif
