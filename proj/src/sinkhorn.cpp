#include "topotip/sinkhorn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace topotip
{

namespace
{

std::vector<Index> support(const Vector & w)
{
  std::vector<Index> idx;
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) {
      idx.push_back(i);
    }
  }
  return idx;
}

// f_i = -eps log sum_j b_j exp((g_j - C_ij) / eps)
void soft_row_update(const Matrix & C, const Vector & log_b, const Vector & g, double eps,
  Vector & f)
{
  for (Index i = 0; i < C.rows(); ++i) {
    double top = -std::numeric_limits<double>::infinity();
    for (Index j = 0; j < C.cols(); ++j) {
      top = std::max(top, (g(j) - C(i, j)) / eps + log_b(j));
    }
    double s = 0.0;
    for (Index j = 0; j < C.cols(); ++j) {
      s += std::exp((g(j) - C(i, j)) / eps + log_b(j) - top);
    }
    f(i) = -eps * (top + std::log(s));
  }
}

}  // namespace

void round_to_marginals(Matrix & P, const Vector & a, const Vector & b)
{
  const Vector r = P.rowwise().sum();
  for (Index i = 0; i < P.rows(); ++i) {
    if (r(i) > a(i)) {
      P.row(i) *= a(i) / r(i);
    }
  }
  const Vector c = P.colwise().sum().transpose();
  for (Index j = 0; j < P.cols(); ++j) {
    if (c(j) > b(j)) {
      P.col(j) *= b(j) / c(j);
    }
  }
  const Vector er = (a - P.rowwise().sum()).cwiseMax(0.0);
  const Vector ec = (b - P.colwise().sum().transpose()).cwiseMax(0.0);
  const double mass = er.sum();
  if (mass > 0.0) {
    P.noalias() += er * ec.transpose() / mass;
  }
}

double marginal_violation(const Matrix & P, const Vector & a, const Vector & b)
{
  double v = 0.0;
  if (P.rows() > 0 && P.cols() > 0) {
    v = std::max((P.rowwise().sum() - a).cwiseAbs().maxCoeff(),
        (P.colwise().sum().transpose() - b).cwiseAbs().maxCoeff());
  } else {
    v = std::max(a.size() ? a.cwiseAbs().maxCoeff() : 0.0, b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  }
  return v;
}

double kl_to_product(const Matrix & P, const Vector & a, const Vector & b)
{
  const double mass = a.sum();
  if (!(mass > 0.0)) {
    return 0.0;
  }
  double kl = 0.0;
  for (Index j = 0; j < P.cols(); ++j) {
    for (Index i = 0; i < P.rows(); ++i) {
      const double ref = a(i) * b(j) / mass;
      const double p = P(i, j);
      if (p > 0.0) {
        kl += p * std::log(p / ref) - p + ref;
      } else {
        kl += ref;
      }
    }
  }
  return kl;
}

Matrix sinkhorn(const Matrix & cost, const Vector & a, const Vector & b,
  const SinkhornOptions & options, SinkhornDuals * warm, SinkhornReport * report)
{
  if (cost.rows() != a.size() || cost.cols() != b.size()) {
    throw ConfigError("sinkhorn: cost shape does not match marginals");
  }
  if (!(options.epsilon > 0.0)) {
    throw ConfigError("sinkhorn: epsilon must be > 0");
  }
  if (!cost.allFinite()) {
    throw NumericalError("sinkhorn: non-finite cost");
  }
  Matrix plan = Matrix::Zero(a.size(), b.size());
  SinkhornReport rep;

  const auto rows = support(a);
  const auto cols = support(b);
  if (rows.empty() || cols.empty()) {
    rep.converged = rows.empty() && cols.empty();
    rep.marginal_violation = marginal_violation(plan, a, b);
    if (report) {
      *report = rep;
    }
    return plan;
  }

  const auto nr = static_cast<Index>(rows.size());
  const auto nc = static_cast<Index>(cols.size());
  Matrix C(nr, nc);
  Vector as(nr), bs(nc), f = Vector::Zero(nr), g = Vector::Zero(nc);
  const bool warm_ok = warm && warm->f.size() == a.size() && warm->g.size() == b.size() &&
    warm->f.allFinite() && warm->g.allFinite();
  for (Index r = 0; r < nr; ++r) {
    as(r) = a(rows[static_cast<std::size_t>(r)]);
    if (warm_ok) {
      f(r) = warm->f(rows[static_cast<std::size_t>(r)]);
    }
    for (Index c = 0; c < nc; ++c) {
      C(r, c) = cost(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]);
    }
  }
  for (Index c = 0; c < nc; ++c) {
    bs(c) = b(cols[static_cast<std::size_t>(c)]);
    if (warm_ok) {
      g(c) = warm->g(cols[static_cast<std::size_t>(c)]);
    }
  }
  const Vector log_a = as.array().log();
  const Vector log_b = bs.array().log();

  Matrix K(nr, nc);
  Vector u = Vector::Ones(nr), v = Vector::Ones(nc);
  double eps = options.epsilon;
  // One exact log-domain sweep, then rebuild the kernel around (f, g).
  auto rebase = [&]() {
      soft_row_update(C, log_b, g, eps, f);
      Matrix Ct = C.transpose();
      soft_row_update(Ct, log_a, f, eps, g);
      for (Index c = 0; c < nc; ++c) {
        for (Index r = 0; r < nr; ++r) {
          K(r, c) = std::exp((f(r) + g(c) - C(r, c)) / eps);
        }
      }
      u.setOnes();
      v.setOnes();
    };
  auto absorb = [&]() {
      f.array() += eps * u.array().log();
      g.array() += eps * v.array().log();
      for (Index c = 0; c < nc; ++c) {
        for (Index r = 0; r < nr; ++r) {
          K(r, c) = std::exp((f(r) + g(c) - C(r, c)) / eps);
        }
      }
      u.setOnes();
      v.setOnes();
    };

  constexpr double kBound = 1e13;
  Vector Kbv(nr), Kau(nc);
  Index it = 0;
  double viol = 0.0;
  // Scaling iterations at the current eps until the row error drops below
  // `tol` or `budget` iterations have run.
  auto iterate = [&](double tol, Index budget) {
      rebase();
      for (Index k = 0;; ++k, ++it) {
        Kbv.noalias() = K * bs.cwiseProduct(v);
        viol = (as.cwiseProduct(u).cwiseProduct(Kbv) - as).cwiseAbs().maxCoeff();
        if (!(Kbv.minCoeff() > 0.0) || !Kbv.allFinite()) {
          absorb();
          rebase();
          Kbv.noalias() = K * bs.cwiseProduct(v);
          viol = (Kbv.cwiseProduct(as) - as).cwiseAbs().maxCoeff();
        }
        if (viol < tol || k >= budget) {
          return;
        }
        u = Kbv.cwiseInverse();
        Kau.noalias() = K.transpose() * as.cwiseProduct(u);
        v = Kau.cwiseInverse();
        if (!v.allFinite() || u.maxCoeff() > kBound || v.maxCoeff() > kBound ||
          u.minCoeff() < 1.0 / kBound || v.minCoeff() < 1.0 / kBound)
        {
          if (!v.allFinite() || !(v.minCoeff() > 0.0)) {
            v.setOnes();
            rebase();
          } else {
            absorb();
          }
        }
      }
    };

  if (!warm_ok) {
    // Cold start: anneal eps down from the cost range.
    const double range = C.maxCoeff() - C.minCoeff();
    std::vector<double> schedule;
    for (double e = range; e > 4.0 * options.epsilon; e /= 4.0) {
      schedule.push_back(e);
    }
    for (double e : schedule) {
      eps = e;
      iterate(1e-6, 200);
      absorb();
    }
    eps = options.epsilon;
  }
  iterate(options.tolerance, options.max_iterations);

  Matrix Ps = as.cwiseProduct(u).asDiagonal() * K * bs.cwiseProduct(v).asDiagonal();
  if (!Ps.allFinite()) {
    throw NumericalError("sinkhorn: non-finite coupling");
  }
  rep.residual = viol;
  round_to_marginals(Ps, as, bs);
  for (Index r = 0; r < nr; ++r) {
    for (Index c = 0; c < nc; ++c) {
      plan(rows[static_cast<std::size_t>(r)], cols[static_cast<std::size_t>(c)]) = Ps(r, c);
    }
  }

  if (warm) {
    warm->f = Vector::Zero(a.size());
    warm->g = Vector::Zero(b.size());
    for (Index r = 0; r < nr; ++r) {
      warm->f(rows[static_cast<std::size_t>(r)]) = f(r) + eps * std::log(u(r));
    }
    for (Index c = 0; c < nc; ++c) {
      warm->g(cols[static_cast<std::size_t>(c)]) = g(c) + eps * std::log(v(c));
    }
  }
  rep.iterations = it;
  rep.marginal_violation = marginal_violation(plan, a, b);
  rep.converged = viol < options.tolerance;
  if (report) {
    *report = rep;
  }
  return plan;
}

}  // namespace topotip
