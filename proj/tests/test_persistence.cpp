#include "oracles.hpp"

#include "topotip/mtn.hpp"
#include "topotip/persistence.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace topotip;

namespace
{

PersistenceDiagram full_diagram(const Matrix & X)
{
  return compute_persistence(build_vr_filtration(pairwise_sq_dist(make_cloud(X)), 2));
}

Matrix circle(Index n, double radius)
{
  Matrix X(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
    X(i, 0) = radius * std::cos(a);
    X(i, 1) = radius * std::sin(a);
  }
  return X;
}

}  // namespace

TEST_CASE("filtration order")
{
  std::mt19937_64 rng(21);
  const auto D = pairwise_sq_dist(make_cloud(oracle::random_points(rng, 6, 2)));
  const auto f = build_vr_filtration(D, 2);
  CHECK(f.simplices.size() == 6 + 15 + 20);
  for (std::size_t k = 1; k < f.simplices.size(); ++k) {
    const auto & a = f.simplices[k - 1];
    const auto & b = f.simplices[k];
    CHECK(std::tie(a.value, a.dim, a.vertices) <= std::tie(b.value, b.dim, b.vertices));
  }
  const auto cut = build_vr_filtration(D, 1, 0.5);
  for (const auto & s : cut.simplices) {
    CHECK(s.value <= 0.5);
    CHECK(s.dim <= 1);
  }
}

TEST_CASE("unit square")
{
  Matrix X(4, 2);
  X << 0, 0, 1, 0, 1, 1, 0, 1;
  const auto h1 = full_diagram(X).in_dim(1);
  REQUIRE(h1.size() == 1);
  CHECK(std::abs(h1[0].birth - 1.0) < 1e-12);
  CHECK(std::abs(h1[0].death - std::sqrt(2.0)) < 1e-12);
  CHECK(h1[0].representative == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("optimized reduction matches the naive reduction")
{
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<Index> size(3, 7);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix X = oracle::random_points(rng, size(rng), 2);
    const auto D = pairwise_sq_dist(make_cloud(X));
    CAPTURE(trial);
    CHECK(oracle::as_pairs(compute_persistence(build_vr_filtration(D, 2))) ==
      oracle::naive_persistence(D.values));
  }
}

TEST_CASE("enclosing-radius truncation keeps every finite pair")
{
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix X = oracle::random_points(rng, 12, 2);
    const auto D = pairwise_sq_dist(make_cloud(X));
    auto finite = [](const PersistenceDiagram & d) {
        PersistenceDiagram out;
        for (const auto & p : d.pairs) {
          if (p.finite()) {
            out.pairs.push_back(p);
          }
        }
        return oracle::as_pairs(out);
      };
    CHECK(finite(rips_persistence(D)) == finite(compute_persistence(build_vr_filtration(D, 2))));
  }
}

TEST_CASE("H0 has one infinite class and N - 1 merges")
{
  std::mt19937_64 rng(24);
  const auto d = full_diagram(oracle::random_points(rng, 15, 3));
  const auto h0 = d.in_dim(0);
  Index infinite = 0;
  for (const auto & p : h0) {
    infinite += p.finite() ? 0 : 1;
    CHECK(p.birth == 0.0);
  }
  CHECK(infinite == 1);
  CHECK(h0.size() == 15);
}

TEST_CASE("representatives are cycles of the pair's birth scale")
{
  std::mt19937_64 rng(25);
  Matrix X = circle(24, 1.0);
  std::normal_distribution<double> g(0.0, 0.05);
  for (Index i = 0; i < X.size(); ++i) {
    X.data()[i] += g(rng);
  }
  const auto D = pairwise_sq_dist(make_cloud(X));
  for (const auto & p : rips_persistence(D).in_dim(1)) {
    CHECK(p.representative.size() >= 3);
    CHECK(p.birth < p.death);
  }
}

TEST_CASE("circle barcode and top-k selection")
{
  const auto d = rips_persistence(pairwise_sq_dist(make_cloud(circle(30, 1.0))));
  const auto top = top_k_pairs(d, 1, 1);
  REQUIRE(top.pairs.size() == 1);
  CHECK(top.pairs[0].persistence() > 1.0);
  CHECK(top.pairs[0].representative.size() == 30);
  CHECK(d.max_persistence(1) == top.pairs[0].persistence());
  CHECK(top_k_pairs(d, 1, 0).pairs.empty());
}

TEST_CASE("persistence entropy")
{
  PersistenceDiagram d;
  CHECK(persistence_entropy(d, 1).degenerate);
  d.pairs = {{1, 0.0, 1.0, {}}, {1, 0.5, 1.5, {}}, {1, 0.0, kInfinity, {}}};
  const auto pe = persistence_entropy(d, 1);
  CHECK_FALSE(pe.degenerate);
  CHECK(pe.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("MTN incidence follows representatives")
{
  const auto net = build_mtn(make_cloud(circle(20, 1.0)));
  REQUIRE(net.num_cycles() >= 1);
  CHECK(net.mu.sum() == doctest::Approx(1.0));
  CHECK(net.nu.sum() == doctest::Approx(1.0));
  for (Index j = 0; j < net.num_cycles(); ++j) {
    const auto & rep = net.cycles.pairs[j].representative;
    CHECK(net.incidence.col(j).sum() == static_cast<double>(rep.size()));
    for (int v : rep) {
      CHECK(net.incidence(v, j) == 1.0);
    }
    CHECK(net.diagram(j, 0) == net.cycles.pairs[j].birth);
    CHECK(net.diagram(j, 1) == net.cycles.pairs[j].death);
  }
  MtnConfig bad;
  bad.hom_dim = 2;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("MTN with no cycles")
{
  Matrix X(5, 2);
  X << 0, 0, 1, 0, 2.5, 0, 4, 0, 4.2, 0;
  const auto net = build_mtn(make_cloud(X));
  CHECK(net.num_cycles() == 0);
  CHECK(net.incidence.rows() == 5);
  CHECK(net.incidence.cols() == 0);
}
