#include "topotip/geodesic.hpp"

#include "topotip/entropy.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>

namespace topotip
{

namespace
{

// Runs body(k) for k in [0, count) on up to worker_threads() threads.
// The first exception thrown by any job is rethrown after all joined.
template<typename Body>
void parallel_for(Index count, Body body)
{
  const Index threads = std::min(worker_threads(), count);
  if (threads <= 1) {
    for (Index k = 0; k < count; ++k) {
      body(k);
    }
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (Index w = 0; w < threads; ++w) {
    pool.emplace_back([&]() {
        for (Index k = next++; k < count; k = next++) {
          try {
            body(k);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!error) {
              error = std::current_exception();
            }
          }
        }
      });
  }
  for (auto & t : pool) {
    t.join();
  }
  if (error) {
    std::rethrow_exception(error);
  }
}

void check_unit_interval(double t)
{
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ConfigError("t must lie in [0, 1]");
  }
}

}  // namespace

Index worker_threads()
{
  Index cap = static_cast<Index>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char * env = std::getenv("TOPOTIP_THREADS")) {
    char * end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) {
      cap = std::min<Index>(cap, v);
    }
  }
  return cap;
}

Matching extract_matching(const Matrix & pi_v)
{
  Matching m;
  m.target.resize(static_cast<std::size_t>(pi_v.rows()));
  for (Index i = 0; i < pi_v.rows(); ++i) {
    Index best = 0;
    const double top = pi_v.cols() > 0 ? pi_v.row(i).maxCoeff(&best) : 0.0;
    if (!(top > 0.0)) {
      throw NumericalError("matching: row " + std::to_string(i) + " of pi_v carries no mass");
    }
    m.target[static_cast<std::size_t>(i)] = best;
  }
  return m;
}

Matching assignment_matching(const Matrix & weights)
{
  const Index n = weights.rows();
  const Index m = weights.cols();
  if (n > m) {
    throw ConfigError("assignment matching needs rows <= cols");
  }
  // Shortest augmenting paths with potentials, minimizing -weights.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Index> p(static_cast<std::size_t>(m + 1), 0);
  std::vector<Index> way(static_cast<std::size_t>(m + 1), 0);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<char> used(static_cast<std::size_t>(m + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const Index i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          continue;
        }
        const double cur = -weights(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] - v[sj];
        if (cur < minv[sj]) {
          minv[sj] = cur;
          way[sj] = j0;
        }
        if (minv[sj] < delta) {
          delta = minv[sj];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        const auto sj = static_cast<std::size_t>(j);
        if (used[sj]) {
          u[static_cast<std::size_t>(p[sj])] += delta;
          v[sj] -= delta;
        } else {
          minv[sj] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const Index j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  Matching out;
  out.target.assign(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= m; ++j) {
    if (p[static_cast<std::size_t>(j)] != 0) {
      out.target[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
    }
  }
  return out;
}

Matching match(const Matrix & pi_v, MatchingMode mode)
{
  return mode == MatchingMode::argmax ? extract_matching(pi_v) : assignment_matching(pi_v);
}

SquaredDistanceMatrix interpolate_sq_dist(const SquaredDistanceMatrix & kA,
  const SquaredDistanceMatrix & kB, const Matching & m, double t)
{
  check_unit_interval(t);
  const Index n = kA.size();
  if (m.size() != n) {
    throw ConfigError("matching size does not match the source kernel");
  }
  for (Index j : m.target) {
    if (j < 0 || j >= kB.size()) {
      throw ConfigError("matching points outside the target kernel");
    }
  }
  SquaredDistanceMatrix out{Matrix(n, n)};
  for (Index j = 0; j < n; ++j) {
    const Index mj = m.target[static_cast<std::size_t>(j)];
    for (Index i = 0; i < n; ++i) {
      const Index mi = m.target[static_cast<std::size_t>(i)];
      out.values(i, j) = (1.0 - t) * kA.values(i, j) + t * kB.values(mi, mj);
    }
  }
  return out;
}

PointCloud classical_mds(const SquaredDistanceMatrix & k, Index d)
{
  if (d < 1) {
    throw ConfigError("embedding dimension must be >= 1");
  }
  const Index n = k.size();
  if (n < 1) {
    throw InputError("classical_mds: empty distance matrix");
  }
  Matrix B = -0.5 * k.values;
  const Vector row_mean = B.rowwise().mean();
  const Vector col_mean = B.colwise().mean().transpose();
  const double mean = B.mean();
  B.colwise() -= row_mean;
  B.rowwise() -= col_mean.transpose();
  B.array() += mean;
  B = 0.5 * (B + B.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> solver(B);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("classical_mds: eigendecomposition failed");
  }
  Matrix coords = Matrix::Zero(n, d);
  const Index take = std::min(d, n);
  for (Index c = 0; c < take; ++c) {
    const Index idx = n - 1 - c;  // eigenvalues ascend
    const double lambda = std::max(solver.eigenvalues()(idx), 0.0);
    coords.col(c) = solver.eigenvectors().col(idx) * std::sqrt(lambda);
  }
  return make_cloud(std::move(coords));
}

PointCloud procrustes_align(const PointCloud & X, const PointCloud & ref)
{
  if (X.size() != ref.size() || X.dim() != ref.dim()) {
    throw ConfigError("procrustes_align: shapes differ");
  }
  const Eigen::RowVectorXd mx = X.coords.colwise().mean();
  const Eigen::RowVectorXd mr = ref.coords.colwise().mean();
  const Matrix xc = X.coords.rowwise() - mx;
  const Matrix rc = ref.coords.rowwise() - mr;
  Eigen::JacobiSVD<Matrix> svd(xc.transpose() * rc, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix & U = svd.matrixU();
  const Matrix & V = svd.matrixV();
  Vector signs = Vector::Ones(X.dim());
  if ((U * V.transpose()).determinant() < 0.0) {
    signs(X.dim() - 1) = -1.0;
  }
  const Matrix rotation = U * signs.asDiagonal() * V.transpose();
  PointCloud out = X;
  out.coords = (xc * rotation).rowwise() + mr;
  return out;
}

PointCloud reconstruct_frame(const PointCloud & cloudA, const PointCloud & cloudB,
  const Matrix & pi_v, double t, MatchingMode mode)
{
  check_unit_interval(t);
  validate(cloudA);
  validate(cloudB);
  if (cloudA.dim() != cloudB.dim()) {
    throw InputError("reconstruct_frame: clouds differ in dimension");
  }
  if (pi_v.rows() != cloudA.size() || pi_v.cols() != cloudB.size()) {
    throw ConfigError("reconstruct_frame: coupling shape does not match the clouds");
  }
  const Matching m = match(pi_v, mode);
  const auto kt = interpolate_sq_dist(pairwise_sq_dist(cloudA), pairwise_sq_dist(cloudB), m, t);
  PointCloud embedded = classical_mds(kt, cloudA.dim());

  PointCloud anchor = cloudA;
  for (Index i = 0; i < cloudA.size(); ++i) {
    anchor.coords.row(i) = (1.0 - t) * cloudA.coords.row(i) +
      t * cloudB.coords.row(m.target[static_cast<std::size_t>(i)]);
  }
  PointCloud out = procrustes_align(embedded, anchor);
  out.labels = cloudA.labels;
  out.frame_param.reset();
  if (cloudA.frame_param && cloudB.frame_param) {
    out.frame_param = (1.0 - t) * *cloudA.frame_param + t * *cloudB.frame_param;
  }
  return out;
}

Matrix blend_incidence(const Matrix & omegaA, const Matrix & omegaB, const Matching & m,
  double t)
{
  check_unit_interval(t);
  if (m.size() != omegaA.rows()) {
    throw ConfigError("matching size does not match omegaA");
  }
  const Index cols = std::max(omegaA.cols(), omegaB.cols());
  Matrix out = Matrix::Zero(omegaA.rows(), cols);
  out.leftCols(omegaA.cols()) = (1.0 - t) * omegaA;
  for (Index i = 0; i < omegaA.rows(); ++i) {
    out.row(i).head(omegaB.cols()) += t * omegaB.row(m.target[static_cast<std::size_t>(i)]);
  }
  return out;
}

// ---------------------------------------------------------------------------

double IndicatorTable::max_marginal_violation() const
{
  double v = 0.0;
  for (const auto & r : rows) {
    v = std::max(v, r.marginal_violation);
  }
  for (double k : keyframe_violation) {
    v = std::max(v, k);
  }
  return v;
}

Index IndicatorTable::nonconverged() const
{
  return std::count_if(rows.begin(), rows.end(),
           [](const IndicatorRow & r) {return !r.converged;});
}

void validate(const CurveOptions & options)
{
  validate(options.tpot);
  validate(options.mtn);
  if (!(options.gamma >= 0.0 && options.gamma <= 1.0)) {
    throw ConfigError("gamma must lie in [0, 1]");
  }
  if (options.L < 1) {
    throw ConfigError("L must be >= 1");
  }
}

IndicatorRow evaluate_frame(const Mtn & reference, const PointCloud & frame, double tau,
  const CurveOptions & options)
{
  const Mtn P = build_mtn(frame, options.mtn);
  const TpotResult res = solve_tpot(reference, P, options.tpot);
  IndicatorRow row;
  row.tau = tau;
  row.L_geom = res.distortion.geom;
  row.L_topo = res.distortion.topo;
  row.L_hyper = res.distortion.hyper;
  row.objective = res.distortion.objective;
  row.converged = res.converged;
  row.marginal_violation = res.max_marginal_violation;
  row.n_cycles = P.num_cycles();
  row.PE = persistence_entropy(P.barcode, options.mtn.hom_dim).value;
  row.max_h1_persistence = P.barcode.max_persistence(1);
  const auto inc = make_incidence(P.incidence);
  const auto hv = he_vertex(inc);
  const auto he = he_edge(inc);
  const auto hs = he_sym(inc, options.gamma);
  row.HE_V = hv.value;
  row.HE_E = he.value;
  row.HE_sym = hs.value;
  row.entropy_degenerate = hv.degenerate || he.degenerate || hs.degenerate;
  return row;
}

namespace
{

// Resamples the larger cloud so both have min(N, N') points.
void equalize(PointCloud & a, PointCloud & b, std::uint64_t seed)
{
  if (a.size() > b.size()) {
    a = resample(a, b.size(), seed);
  } else if (b.size() > a.size()) {
    b = resample(b, a.size(), seed);
  }
}

}  // namespace

IndicatorTable dynamic_curves(const SequenceDataset & seq, const std::vector<Index> & keyframes,
  const CurveOptions & options)
{
  validate(options);
  validate(seq);
  if (keyframes.size() < 2) {
    throw ConfigError("at least two keyframes are required");
  }
  for (std::size_t k = 0; k < keyframes.size(); ++k) {
    if (keyframes[k] < 0 || keyframes[k] >= seq.size() ||
      (k > 0 && keyframes[k] <= keyframes[k - 1]))
    {
      throw ConfigError("keyframes must be increasing indices into the sequence");
    }
  }
  const auto T = static_cast<Index>(keyframes.size());
  const Index L = options.L;
  auto key = [&](Index i) -> const PointCloud & {
      return seq.frames[static_cast<std::size_t>(keyframes[static_cast<std::size_t>(i)])];
    };

  IndicatorTable table;
  table.rows.resize(static_cast<std::size_t>((T - 1) * L + 1));
  const Mtn global_ref = build_mtn(key(0), options.mtn);
  table.rows[0] = evaluate_frame(global_ref, key(0), 0.0, options);

  for (Index i = 0; i + 1 < T; ++i) {
    PointCloud A = key(i);
    PointCloud B = key(i + 1);
    equalize(A, B, options.seed + static_cast<std::uint64_t>(i));
    const TpotResult sol = solve_tpot(build_mtn(A, options.mtn), build_mtn(B, options.mtn),
      options.tpot);
    table.keyframe_violation.push_back(sol.max_marginal_violation);
    const Mtn segment_ref = options.reference == ReferenceMode::segment ?
      build_mtn(key(i), options.mtn) : Mtn{};
    const Mtn & ref = options.reference == ReferenceMode::segment ? segment_ref : global_ref;

    parallel_for(L, [&](Index k) {
        const Index l = k + 1;
        const double tau = static_cast<double>(l) / static_cast<double>(L);
        const double tau_star = static_cast<double>(i * L + l) / static_cast<double>(L * (T - 1));
        const PointCloud frame = l == L ? key(i + 1) : reconstruct_frame(A, B, sol.coupling.pi_v,
        tau, options.matching);
        IndicatorRow row = evaluate_frame(ref, frame, tau_star, options);
        row.converged = row.converged && sol.converged;
        table.rows[static_cast<std::size_t>(i * L + l)] = row;
      });
  }
  return table;
}

IndicatorTable baseline_curves(const SequenceDataset & seq, const CurveOptions & options)
{
  validate(options);
  validate(seq);
  const Index T = seq.size();
  if (T < 2) {
    throw InputError("baseline curves need at least two frames");
  }
  IndicatorTable table;
  table.rows.resize(static_cast<std::size_t>(T));
  const Mtn ref = build_mtn(seq.frames.front(), options.mtn);
  parallel_for(T, [&](Index i) {
      const double tau = static_cast<double>(i) / static_cast<double>(T - 1);
      table.rows[static_cast<std::size_t>(i)] =
      evaluate_frame(ref, seq.frames[static_cast<std::size_t>(i)], tau, options);
    });
  return table;
}

std::vector<Index> even_keyframes(Index frames, Index count)
{
  if (count < 2 || frames < count) {
    throw ConfigError("need 2 <= keyframe count <= frame count");
  }
  std::vector<Index> out;
  for (Index k = 0; k < count; ++k) {
    const double pos = static_cast<double>(k) * static_cast<double>(frames - 1) /
      static_cast<double>(count - 1);
    out.push_back(static_cast<Index>(std::lround(pos)));
  }
  return out;
}

namespace
{

constexpr const char * kIndicatorHeader =
  "tau,L_geom,L_topo,L_hyper,PE,HE_V,HE_E,HE_sym,converged,n_cycles";

}  // namespace

void save_indicator_csv(const IndicatorTable & table, const std::filesystem::path & path)
{
  std::vector<std::string> rows;
  for (const auto & r : table.rows) {
    rows.push_back(format_real(r.tau) + "," + format_real(r.L_geom) + "," +
      format_real(r.L_topo) + "," + format_real(r.L_hyper) + "," + format_real(r.PE) + "," +
      format_real(r.HE_V) + "," + format_real(r.HE_E) + "," + format_real(r.HE_sym) + "," +
      (r.converged ? "1" : "0") + "," + std::to_string(r.n_cycles));
  }
  write_csv(path, kIndicatorHeader, rows);
}

IndicatorTable load_indicator_csv(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }
  std::string line;
  if (!std::getline(in, line) || line != kIndicatorHeader) {
    throw SchemaError("unexpected indicator header in " + path.string());
  }
  IndicatorTable table;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      f.push_back(cell);
    }
    if (f.size() != 10) {
      throw SchemaError("line " + std::to_string(lineno) + ": expected 10 fields");
    }
    try {
      IndicatorRow r;
      r.tau = std::stod(f[0]);
      r.L_geom = std::stod(f[1]);
      r.L_topo = std::stod(f[2]);
      r.L_hyper = std::stod(f[3]);
      r.PE = std::stod(f[4]);
      r.HE_V = std::stod(f[5]);
      r.HE_E = std::stod(f[6]);
      r.HE_sym = std::stod(f[7]);
      r.converged = f[8] == "1";
      r.n_cycles = std::stol(f[9]);
      table.rows.push_back(r);
    } catch (const std::logic_error &) {
      throw ParseError(lineno, "non-numeric indicator field");
    }
  }
  return table;
}

}  // namespace topotip
