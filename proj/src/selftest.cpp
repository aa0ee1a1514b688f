#include "topotip/commands.hpp"
#include "topotip/entropy.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>

namespace topotip
{

namespace
{

PointCloud random_cloud(std::mt19937_64 & rng, Index n, Index d)
{
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix X(n, d);
  for (Index i = 0; i < X.size(); ++i) {
    X.data()[i] = u(rng);
  }
  return make_cloud(std::move(X));
}

PointCloud noisy_circle(std::mt19937_64 & rng, Index n, double radius)
{
  std::normal_distribution<double> noise(0.0, 0.03);
  Matrix X(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    X(i, 0) = radius * std::cos(a) + noise(rng);
    X(i, 1) = radius * std::sin(a) + noise(rng);
  }
  return make_cloud(std::move(X));
}

bool check_triangle_inequality()
{
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto D = pairwise_sq_dist(random_cloud(rng, 8, 2));
    const Matrix L = D.values.cwiseSqrt();
    for (Index i = 0; i < 8; ++i) {
      for (Index j = 0; j < 8; ++j) {
        for (Index k = 0; k < 8; ++k) {
          if (L(i, j) > L(i, k) + L(k, j) + 1e-12) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

bool check_square_persistence()
{
  Matrix X(4, 2);
  X << 0, 0, 1, 0, 1, 1, 0, 1;
  const auto diag = compute_persistence(build_vr_filtration(pairwise_sq_dist(make_cloud(X)), 2));
  const auto h1 = diag.in_dim(1);
  return h1.size() == 1 && std::abs(h1[0].birth - 1.0) < 1e-12 &&
         std::abs(h1[0].death - std::sqrt(2.0)) < 1e-12 && h1[0].representative.size() == 4;
}

bool check_circle_cycle()
{
  std::mt19937_64 rng(2);
  const Mtn net = build_mtn(noisy_circle(rng, 40, 1.0));
  return net.num_cycles() >= 1 && net.cycles.pairs.front().persistence() > 1.0 &&
         net.cycles.pairs.front().representative.size() >= 20;
}

bool check_sinkhorn_marginals()
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix C(30, 25);
  for (Index i = 0; i < C.size(); ++i) {
    C.data()[i] = u(rng);
  }
  const Vector a = Vector::Constant(30, 1.0 / 30.0);
  const Vector b = Vector::Constant(25, 1.0 / 25.0);
  SinkhornReport rep;
  const Matrix P = sinkhorn(C, a, b, {0.003, 5000, 1e-10}, nullptr, &rep);
  return marginal_violation(P, a, b) < 1e-6 && P.minCoeff() >= 0.0;
}

bool check_self_distance()
{
  std::mt19937_64 rng(4);
  const Mtn net = build_mtn(noisy_circle(rng, 30, 0.5));
  const TpotConfig cfg;
  const auto res = solve_tpot(net, net, cfg);
  return res.distortion.objective <= 10.0 * cfg.eps_v &&
         res.max_marginal_violation < 1e-6;
}

bool check_entropy_values()
{
  Matrix w(2, 2);
  w << 1, 1, 1, 0;
  const auto inc = make_incidence(w);
  const double v = he_vertex(inc).value;
  const double e = he_edge(inc).value;
  const double s = he_sym(inc, 0.5).value;
  return std::abs(v - 0.636514) < 1e-6 && std::abs(e - 0.636514) < 1e-6 &&
         std::abs(s - 0.918296) < 1e-6;
}

bool check_entropy_bounds()
{
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.4);
  for (int trial = 0; trial < 200; ++trial) {
    Matrix w(6, 4);
    for (Index i = 0; i < w.size(); ++i) {
      w.data()[i] = coin(rng) ? 1.0 : 0.0;
    }
    const auto inc = make_incidence(w);
    if (inc.total() == 0.0) {
      continue;
    }
    const double hv = he_vertex(inc).value;
    const double he = he_edge(inc).value;
    if (hv < -1e-15 || he < -1e-15 ||
      hv > std::log(static_cast<double>(inc.active_vertices.size())) + 1e-12 ||
      he > std::log(static_cast<double>(inc.active_edges.size())) + 1e-12)
    {
      return false;
    }
  }
  return true;
}

bool check_mds_round_trip()
{
  std::mt19937_64 rng(6);
  const auto cloud = random_cloud(rng, 25, 2);
  const auto D = pairwise_sq_dist(cloud);
  const auto back = pairwise_sq_dist(classical_mds(D, 2));
  return (back.values - D.values).norm() < 1e-8;
}

bool check_reconstruct_endpoints()
{
  std::mt19937_64 rng(7);
  const auto A = random_cloud(rng, 20, 2);
  const auto B = random_cloud(rng, 20, 2);
  Matrix pi = Matrix::Zero(20, 20);
  for (Index i = 0; i < 20; ++i) {
    pi(i, 19 - i) = 1.0 / 20.0;
  }
  const Matching m = extract_matching(pi);
  const auto kA = pairwise_sq_dist(A);
  const auto kB = pairwise_sq_dist(B);
  const auto at0 = pairwise_sq_dist(reconstruct_frame(A, B, pi, 0.0));
  const auto at1 = pairwise_sq_dist(reconstruct_frame(A, B, pi, 1.0));
  return (at0.values - kA.values).cwiseAbs().maxCoeff() < 1e-8 &&
         (at1.values - interpolate_sq_dist(kA, kB, m, 1.0).values).cwiseAbs().maxCoeff() < 1e-8;
}

}  // namespace

int run_selftest(std::ostream & out)
{
  const std::vector<std::pair<const char *, std::function<bool()>>> checks{
    {"triangle inequality of pairwise distances", check_triangle_inequality},
    {"unit square H1 pair", check_square_persistence},
    {"noisy circle carries one long cycle", check_circle_cycle},
    {"sinkhorn marginals", check_sinkhorn_marginals},
    {"tpot self-distance", check_self_distance},
    {"hypergraph entropy values", check_entropy_values},
    {"hypergraph entropy bounds", check_entropy_bounds},
    {"mds round trip", check_mds_round_trip},
    {"reconstruction endpoints", check_reconstruct_endpoints},
  };
  int failures = 0;
  for (const auto & [name, check] : checks) {
    bool ok = false;
    try {
      ok = check();
    } catch (const std::exception & e) {
      out << "  exception: " << e.what() << '\n';
    }
    out << (ok ? "PASS " : "FAIL ") << name << '\n';
    failures += ok ? 0 : 1;
  }
  return failures;
}

}  // namespace topotip
