#ifndef TOPOTIP_TPOT_HPP_
#define TOPOTIP_TPOT_HPP_

#include "topotip/mtn.hpp"
#include "topotip/sinkhorn.hpp"

#include <filesystem>
#include <vector>

namespace topotip
{

// ---------------------------------------------------------------------------
// Cost operators (squared loss, p = 2)

/// (L^geom (x) C)[i, i'] = sum_{j, j'} (kA[i, j] - kB[i', j'])^2 C[j, j'],
/// via kA^2 r 1^T + 1 c^T (kB^2)^T - 2 kA C kB^T with r, c the marginals of C.
template<typename DA, typename DB, typename DC>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
geom_cost_apply(const Eigen::MatrixBase<DA> & kA, const Eigen::MatrixBase<DB> & kB,
  const Eigen::MatrixBase<DC> & C)
{
  using Scalar = typename DA::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Vec r = C.rowwise().sum();
  const Vec c = C.colwise().sum().transpose();
  const Vec left = kA.cwiseAbs2() * r;
  const Vec right = kB.cwiseAbs2() * c;
  Mat out = Scalar(-2) * (kA * C * kB.transpose());
  out.colwise() += left;
  out.rowwise() += right.transpose();
  return out;
}

/// <L^geom (x) P, P>.
template<typename DA, typename DB, typename DP>
typename DA::Scalar geom_distortion(const Eigen::MatrixBase<DA> & kA,
  const Eigen::MatrixBase<DB> & kB, const Eigen::MatrixBase<DP> & P)
{
  return geom_cost_apply(kA, kB, P).cwiseProduct(P).sum();
}

/// Appends the all-zero column standing for the diagonal slot.
template<typename D>
Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic>
augment_incidence(const Eigen::MatrixBase<D> & omega)
{
  Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
    Eigen::Matrix<typename D::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(
    omega.rows(), omega.cols() + 1);
  out.leftCols(omega.cols()) = omega;
  return out;
}

/// Hyper cost seen by the point coupling, for a fixed augmented cycle
/// coupling pi_e ((M+1) x (M'+1)). With zero diagonal columns the four
/// cases of 1/2 |w - w'|^2 collapse into one expression:
///   1/2 (wA^2 r_e 1^T + 1 (wB^2 c_e)^T - 2 wA pi_e wB^T).
template<typename DA, typename DB, typename DE>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
hyper_cost_points(const Eigen::MatrixBase<DA> & omegaA_aug,
  const Eigen::MatrixBase<DB> & omegaB_aug, const Eigen::MatrixBase<DE> & pi_e)
{
  using Scalar = typename DA::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Vec re = pi_e.rowwise().sum();
  const Vec ce = pi_e.colwise().sum().transpose();
  Mat out = Scalar(-2) * (omegaA_aug * pi_e * omegaB_aug.transpose());
  out.colwise() += omegaA_aug.cwiseAbs2() * re;
  out.rowwise() += (omegaB_aug.cwiseAbs2() * ce).transpose();
  return Scalar(0.5) * out;
}

/// Hyper cost seen by the cycle coupling, for a fixed point coupling pi_v.
template<typename DA, typename DB, typename DV>
Eigen::Matrix<typename DA::Scalar, Eigen::Dynamic, Eigen::Dynamic>
hyper_cost_cycles(const Eigen::MatrixBase<DA> & omegaA_aug,
  const Eigen::MatrixBase<DB> & omegaB_aug, const Eigen::MatrixBase<DV> & pi_v)
{
  using Scalar = typename DA::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Vec rv = pi_v.rowwise().sum();
  const Vec cv = pi_v.colwise().sum().transpose();
  Mat out = Scalar(-2) * (omegaA_aug.transpose() * pi_v * omegaB_aug);
  out.colwise() += omegaA_aug.cwiseAbs2().transpose() * rv;
  out.rowwise() += (omegaB_aug.cwiseAbs2().transpose() * cv).transpose();
  return Scalar(0.5) * out;
}

/// (M+1) x (M'+1) squared Euclidean costs between diagram points; the last
/// row/column is the diagonal slot, where a point (b, d) costs (d - b)^2 / 2.
Matrix topo_cost_matrix(const Matrix & diagA, const Matrix & diagB);

/// Cycle measure with a diagonal slot appended: (1/M, ..., 1/M, mass) where
/// mass is the other diagram's total real mass (1, or 0 if it is empty).
Vector augmented_cycle_measure(Index num_cycles, Index other_num_cycles);

// ---------------------------------------------------------------------------
// Solver

struct TpotConfig
{
  double alpha = 0.5;
  double beta = 1.0;
  double eps_v = 0.003;
  double eps_e = 0.01;
  Index outer_iters = 50;
  Index sinkhorn_iters = 5000;
  double tol = 1e-7;            ///< stop when the objective moves less than this
  double marginal_tol = 1e-10;  ///< Sinkhorn stopping tolerance
};

void validate(const TpotConfig & config);

/// pi_v: N x N'. pi_e: (M+1) x (M'+1), last row/column the diagonal slots.
struct CouplingPair
{
  Matrix pi_v;
  Matrix pi_e;
};

/// Unweighted distortions in the networks' own units plus the weighted
/// objective alpha geom + (1 - alpha) topo + beta hyper.
struct DistortionBreakdown
{
  double geom = 0.0;
  double topo = 0.0;
  double hyper = 0.0;
  double objective = 0.0;
};

struct TpotResult
{
  CouplingPair coupling;
  DistortionBreakdown distortion;
  bool converged = false;
  Index outer_iterations = 0;
  /// Entropic objective (rescaled units) after every outer iteration.
  std::vector<double> objective_trace;
  /// Worst marginal error of the couplings returned by the Sinkhorn calls.
  double max_marginal_violation = 0.0;
  /// Whether every Sinkhorn call met marginal_tol before rounding, and the
  /// worst pre-rounding error.
  bool inner_converged = true;
  double max_sinkhorn_residual = 0.0;
};

/// Block-coordinate descent on the entropic objective, starting from the
/// product couplings. Kernels are divided by their joint maximum s and
/// diagrams by sqrt(s) so the exponentials stay in range; distortions are
/// reported in the original units.
///
///  (a) pi_e fixed: Sinkhorn(eps_v) on 2 alpha (L^geom (x) pi_v) + beta H_v(pi_e),
///      the linearization of the concave geometric term;
///  (b) pi_v fixed: Sinkhorn(eps_e) on (1 - alpha) L^topo + beta H_e(pi_v).
///
/// Throws NumericalError on a non-finite objective. Hitting outer_iters
/// without meeting `tol` returns converged = false.
TpotResult solve_tpot(const Mtn & P, const Mtn & Q, const TpotConfig & config = {});

/// Plugs fixed couplings into the three distortion sums (no entropy term).
DistortionBreakdown evaluate_distortions(const Mtn & P, const Mtn & Q,
  const CouplingPair & coupling, double alpha = 0.5, double beta = 1.0);

/// `i,j,mass` for every nonzero entry.
void save_coupling_csv(const Matrix & coupling, const std::filesystem::path & path);

}  // namespace topotip

#endif  // TOPOTIP_TPOT_HPP_
