#include "topotip/tpot.hpp"

#include <cmath>
#include <string>

namespace topotip
{

Matrix topo_cost_matrix(const Matrix & diagA, const Matrix & diagB)
{
  const Index m = diagA.rows();
  const Index mp = diagB.rows();
  Matrix cost = Matrix::Zero(m + 1, mp + 1);
  for (Index u = 0; u < m; ++u) {
    for (Index v = 0; v < mp; ++v) {
      cost(u, v) = (diagA.row(u) - diagB.row(v)).squaredNorm();
    }
    const double l = diagA(u, 1) - diagA(u, 0);
    cost(u, mp) = 0.5 * l * l;
  }
  for (Index v = 0; v < mp; ++v) {
    const double l = diagB(v, 1) - diagB(v, 0);
    cost(m, v) = 0.5 * l * l;
  }
  return cost;
}

Vector augmented_cycle_measure(Index num_cycles, Index other_num_cycles)
{
  Vector w(num_cycles + 1);
  if (num_cycles > 0) {
    w.head(num_cycles).setConstant(1.0 / static_cast<double>(num_cycles));
  }
  w(num_cycles) = other_num_cycles > 0 ? 1.0 : 0.0;
  return w;
}

void validate(const TpotConfig & c)
{
  if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) {
    throw ConfigError("alpha must lie in [0, 1]");
  }
  if (!(c.beta >= 0.0)) {
    throw ConfigError("beta must be >= 0");
  }
  if (!(c.eps_v > 0.0) || !(c.eps_e > 0.0)) {
    throw ConfigError("eps_v and eps_e must be > 0");
  }
  if (c.outer_iters < 1 || c.sinkhorn_iters < 1) {
    throw ConfigError("iteration counts must be >= 1");
  }
  if (!(c.tol >= 0.0) || !(c.marginal_tol > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
}

namespace
{

Matrix product_coupling(const Vector & a, const Vector & b)
{
  const double mass = a.sum();
  if (!(mass > 0.0)) {
    return Matrix::Zero(a.size(), b.size());
  }
  return a * b.transpose() / mass;
}

}  // namespace

DistortionBreakdown evaluate_distortions(const Mtn & P, const Mtn & Q,
  const CouplingPair & coupling, double alpha, double beta)
{
  const Matrix & pv = coupling.pi_v;
  const Matrix & pe = coupling.pi_e;
  if (pv.rows() != P.num_points() || pv.cols() != Q.num_points() ||
    pe.rows() != P.num_cycles() + 1 || pe.cols() != Q.num_cycles() + 1)
  {
    throw ConfigError("coupling shapes do not match the networks");
  }
  DistortionBreakdown d;
  d.geom = geom_distortion(P.kernel.values, Q.kernel.values, pv);
  d.topo = topo_cost_matrix(P.diagram, Q.diagram).cwiseProduct(pe).sum();
  d.hyper = hyper_cost_points(augment_incidence(P.incidence), augment_incidence(Q.incidence), pe)
    .cwiseProduct(pv).sum();
  d.objective = alpha * d.geom + (1.0 - alpha) * d.topo + beta * d.hyper;
  return d;
}

TpotResult solve_tpot(const Mtn & P, const Mtn & Q, const TpotConfig & config)
{
  validate(config);
  const double scale = [&] {
      const double s = std::max(P.kernel.max(), Q.kernel.max());
      return s > 0.0 ? s : 1.0;
    }();
  const double root = std::sqrt(scale);
  const Matrix kA = P.kernel.values / scale;
  const Matrix kB = Q.kernel.values / scale;
  const Matrix wA = augment_incidence(P.incidence);
  const Matrix wB = augment_incidence(Q.incidence);
  const Matrix topo = topo_cost_matrix(P.diagram / root, Q.diagram / root);
  const Vector & mu = P.mu;
  const Vector & mup = Q.mu;
  const Vector nu = augmented_cycle_measure(P.num_cycles(), Q.num_cycles());
  const Vector nup = augmented_cycle_measure(Q.num_cycles(), P.num_cycles());

  const double a = config.alpha;
  const double b = config.beta;

  TpotResult result;
  Matrix pi_v = product_coupling(mu, mup);
  Matrix pi_e = product_coupling(nu, nup);
  SinkhornDuals duals_v, duals_e;
  SinkhornOptions opt_v{config.eps_v, config.sinkhorn_iters, config.marginal_tol};
  SinkhornOptions opt_e{config.eps_e, config.sinkhorn_iters, config.marginal_tol};

  auto entropic_objective = [&]() {
      const double geom = geom_distortion(kA, kB, pi_v);
      const double tp = topo.cwiseProduct(pi_e).sum();
      const double hy = hyper_cost_points(wA, wB, pi_e).cwiseProduct(pi_v).sum();
      return a * geom + (1.0 - a) * tp + b * hy +
             config.eps_v * kl_to_product(pi_v, mu, mup) +
             config.eps_e * kl_to_product(pi_e, nu, nup);
    };

  double previous = entropic_objective();
  for (Index it = 0; it < config.outer_iters; ++it) {
    SinkhornReport rep;
    const Matrix cost_v = 2.0 * a * geom_cost_apply(kA, kB, pi_v) +
      b * hyper_cost_points(wA, wB, pi_e);
    pi_v = sinkhorn(cost_v, mu, mup, opt_v, &duals_v, &rep);
    result.inner_converged = result.inner_converged && rep.converged;
    result.max_sinkhorn_residual = std::max(result.max_sinkhorn_residual, rep.residual);
    result.max_marginal_violation = std::max(result.max_marginal_violation,
        rep.marginal_violation);

    const Matrix cost_e = (1.0 - a) * topo + b * hyper_cost_cycles(wA, wB, pi_v);
    pi_e = sinkhorn(cost_e, nu, nup, opt_e, &duals_e, &rep);
    result.inner_converged = result.inner_converged && rep.converged;
    result.max_sinkhorn_residual = std::max(result.max_sinkhorn_residual, rep.residual);
    result.max_marginal_violation = std::max(result.max_marginal_violation,
        rep.marginal_violation);

    const double current = entropic_objective();
    if (!std::isfinite(current)) {
      throw NumericalError("TpOT objective became non-finite at outer iteration " +
              std::to_string(it + 1));
    }
    result.objective_trace.push_back(current);
    result.outer_iterations = it + 1;
    const bool settled = std::abs(previous - current) < config.tol;
    previous = current;
    if (settled) {
      result.converged = true;
      break;
    }
  }
  result.coupling = {std::move(pi_v), std::move(pi_e)};
  result.distortion = evaluate_distortions(P, Q, result.coupling, a, b);
  return result;
}

void save_coupling_csv(const Matrix & coupling, const std::filesystem::path & path)
{
  std::vector<std::string> rows;
  for (Index i = 0; i < coupling.rows(); ++i) {
    for (Index j = 0; j < coupling.cols(); ++j) {
      if (coupling(i, j) != 0.0) {
        rows.push_back(std::to_string(i) + "," + std::to_string(j) + "," +
          format_real(coupling(i, j)));
      }
    }
  }
  write_csv(path, "i,j,mass", rows);
}

}  // namespace topotip
