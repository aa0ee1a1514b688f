#ifndef TOPOTIP_SINKHORN_HPP_
#define TOPOTIP_SINKHORN_HPP_

#include "topotip/types.hpp"

namespace topotip
{

struct SinkhornOptions
{
  double epsilon = 1e-2;
  Index max_iterations = 5000;
  double tolerance = 1e-10;  ///< max absolute row/column marginal error
};

/// Dual potentials carried between calls to warm-start a solve.
struct SinkhornDuals
{
  Vector f;
  Vector g;
};

struct SinkhornReport
{
  Index iterations = 0;
  double residual = 0.0;            ///< row error of the scaling iterate
  double marginal_violation = 0.0;  ///< of the returned (rounded) plan
  bool converged = false;           ///< residual reached the tolerance
};

/// Entropic OT: argmin <C, P> + eps KL(P | a b^T / |a|) over couplings of
/// a and b (equal total mass). Zero-mass entries of a or b get empty
/// rows/columns.
///
/// Log-domain stabilized: the kernel is built from absorbed dual potentials
/// exp((f_i + g_j - C_ij) / eps) and only the residual scalings are
/// iterated; they are folded back into (f, g) before they leave
/// [1e-13, 1e13]. Without a warm start, eps is annealed down from the cost
/// range first. `warm`, when given, seeds and receives the potentials.
///
/// The scaled plan is finally rounded onto the transport polytope, so the
/// returned coupling has exact marginals even when the iteration budget
/// runs out first.
Matrix sinkhorn(const Matrix & cost, const Vector & a, const Vector & b,
  const SinkhornOptions & options, SinkhornDuals * warm = nullptr,
  SinkhornReport * report = nullptr);

/// Projects a nonnegative P onto couplings of (a, b): rows and columns
/// exceeding their marginal are scaled down, then the remaining deficits
/// are filled by a rank-one term. The L1 change is at most twice the
/// initial marginal error.
void round_to_marginals(Matrix & P, const Vector & a, const Vector & b);

/// Largest absolute deviation of the row sums from a and column sums from b.
double marginal_violation(const Matrix & P, const Vector & a, const Vector & b);

/// Generalized KL(P | a b^T / |a|); the reference mass equals the coupling
/// mass.
double kl_to_product(const Matrix & P, const Vector & a, const Vector & b);

}  // namespace topotip

#endif  // TOPOTIP_SINKHORN_HPP_
