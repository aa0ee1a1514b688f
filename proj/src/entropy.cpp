#include "topotip/entropy.hpp"

#include "topotip/geodesic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace topotip
{

namespace
{

double shannon(const Vector & weights, double total)
{
  double h = 0.0;
  for (Index i = 0; i < weights.size(); ++i) {
    if (weights(i) > 0.0) {
      const double q = weights(i) / total;
      h -= q * std::log(q);
    }
  }
  return h;
}

}  // namespace

IncidenceMatrix make_incidence(Matrix omega)
{
  if (!omega.allFinite() || (omega.size() > 0 && omega.minCoeff() < 0.0)) {
    throw InputError("incidence weights must be finite and nonnegative");
  }
  IncidenceMatrix inc;
  const Vector rows = omega.rowwise().sum();
  const Vector cols = omega.colwise().sum().transpose();
  for (Index i = 0; i < rows.size(); ++i) {
    if (rows(i) > 0.0) {
      inc.active_vertices.push_back(i);
    }
  }
  for (Index j = 0; j < cols.size(); ++j) {
    if (cols(j) > 0.0) {
      inc.active_edges.push_back(j);
    }
  }
  inc.omega = std::move(omega);
  return inc;
}

Measured he_vertex(const IncidenceMatrix & inc)
{
  const double total = inc.total();
  if (!(total > 0.0)) {
    return {0.0, true};
  }
  return {shannon(inc.omega.rowwise().sum(), total), false};
}

Measured he_edge(const IncidenceMatrix & inc)
{
  const double total = inc.total();
  if (!(total > 0.0)) {
    return {0.0, true};
  }
  return {shannon(inc.omega.colwise().sum().transpose(), total), false};
}

Measured he_sym(const IncidenceMatrix & inc, double gamma)
{
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ConfigError("gamma must lie in [0, 1]");
  }
  if (!(inc.total() > 0.0)) {
    return {0.0, true};
  }
  bool degenerate = false;
  auto normalized = [&](double h, std::size_t count) {
      if (count < 2) {
        degenerate = true;
        return 1.0;
      }
      return h / std::log(static_cast<double>(count));
    };
  const double v = normalized(he_vertex(inc).value, inc.active_vertices.size());
  const double e = normalized(he_edge(inc).value, inc.active_edges.size());
  return {gamma * v + (1.0 - gamma) * e, degenerate};
}

Measured spectral_entropy(const IncidenceMatrix & inc)
{
  if (inc.omega.rows() == 0) {
    return {0.0, true};
  }
  const Matrix gram = inc.omega * inc.omega.transpose();
  const double trace = gram.trace();
  if (!(trace > 0.0)) {
    return {0.0, true};
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
  double h = 0.0;
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double lambda = solver.eigenvalues()(i);
    if (lambda >= 1e-12 * trace) {
      const double q = lambda / trace;
      h -= q * std::log2(q);
    }
  }
  return {h, false};
}

Matrix align_cycles(const Matrix & pi_e, bool exact)
{
  if (pi_e.rows() < 1 || pi_e.cols() < 1) {
    throw ConfigError("align_cycles: pi_e must include the diagonal slots");
  }
  const Index m = pi_e.rows() - 1;
  const Index mp = pi_e.cols() - 1;
  Matrix A = Matrix::Zero(mp, m);
  std::vector<char> matched(static_cast<std::size_t>(m), 0);
  for (Index j = 0; j < m; ++j) {
    Index best = 0;
    pi_e.row(j).maxCoeff(&best);
    if (best < mp) {
      A(best, j) = 1.0;
      matched[static_cast<std::size_t>(j)] = 1;
    }
  }
  if (exact && m > 0 && mp > 0) {
    // Re-solve among the cycles that are matched at all.
    const Matrix block = pi_e.topLeftCorner(m, mp);
    A.setZero();
    if (m <= mp) {
      const auto assign = assignment_matching(block);
      for (Index j = 0; j < m; ++j) {
        if (matched[static_cast<std::size_t>(j)]) {
          A(assign.target[static_cast<std::size_t>(j)], j) = 1.0;
        }
      }
    } else {
      const auto assign = assignment_matching(block.transpose());
      for (Index k = 0; k < mp; ++k) {
        const Index j = assign.target[static_cast<std::size_t>(k)];
        if (matched[static_cast<std::size_t>(j)]) {
          A(k, j) = 1.0;
        }
      }
    }
  }
  return A;
}

EntropyField point_level_field(const Matrix & omega_ref, const Matrix & omega_tgt,
  const Matrix & A, double eps)
{
  if (!(eps > 0.0)) {
    throw ConfigError("eps must be > 0");
  }
  const Index n = omega_ref.rows();
  const Index m = omega_ref.cols();
  const Index np = omega_tgt.rows();
  if (A.rows() != omega_tgt.cols() || A.cols() != m) {
    throw InputError("alignment matrix shape does not match the incidences");
  }
  if (n < 2 || np < 2) {
    throw InputError("cycle entropy needs at least two vertices on each side");
  }
  const Matrix aligned = omega_tgt * A;
  auto normalize = [eps](const Matrix & w) {
      Matrix p = w;
      for (Index j = 0; j < w.cols(); ++j) {
        p.col(j) /= w.col(j).sum() + eps;
      }
      return p;
    };
  auto column_entropy = [](const Matrix & p, Index size) {
      Vector h = Vector::Zero(p.cols());
      for (Index j = 0; j < p.cols(); ++j) {
        for (Index i = 0; i < p.rows(); ++i) {
          if (p(i, j) > 0.0) {
            h(j) -= p(i, j) * std::log(p(i, j));
          }
        }
      }
      return Vector(h / std::log(static_cast<double>(size)));
    };
  const Matrix P = normalize(omega_ref);
  const Matrix P_hat = normalize(aligned);
  EntropyField field;
  field.reference_entropy = column_entropy(P, n);
  field.target_entropy = column_entropy(P_hat, np);
  field.per_cycle_delta = field.target_entropy - field.reference_entropy;
  field.scores = P_hat * field.per_cycle_delta.cwiseAbs();
  return field;
}

void save_field_csv(const PointCloud & cloud, const EntropyField & field,
  const std::filesystem::path & path)
{
  if (cloud.size() != field.scores.size()) {
    throw InputError("field has " + std::to_string(field.scores.size()) +
            " scores for a cloud of " + std::to_string(cloud.size()) + " points");
  }
  std::string header = "point_id";
  for (Index k = 0; k < cloud.dim(); ++k) {
    header += ",x" + std::to_string(k);
  }
  header += ",score";
  std::vector<std::string> rows;
  for (Index i = 0; i < cloud.size(); ++i) {
    std::string row = std::to_string(i);
    for (Index k = 0; k < cloud.dim(); ++k) {
      row += "," + format_real(cloud.coords(i, k));
    }
    rows.push_back(row + "," + format_real(field.scores(i)));
  }
  write_csv(path, header, rows);
}

}  // namespace topotip
