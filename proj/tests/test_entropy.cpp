#include "oracles.hpp"

#include "topotip/entropy.hpp"
#include "topotip/mtn.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace topotip;

namespace
{

Matrix random_binary(std::mt19937_64 & rng, Index n, Index m, double p = 0.4)
{
  std::bernoulli_distribution coin(p);
  Matrix w(n, m);
  for (Index i = 0; i < w.size(); ++i) {
    w.data()[i] = coin(rng) ? 1.0 : 0.0;
  }
  return w;
}

Matrix permuted(const Matrix & w, const std::vector<Index> & rows, const std::vector<Index> & cols)
{
  Matrix out(w.rows(), w.cols());
  for (Index i = 0; i < w.rows(); ++i) {
    for (Index j = 0; j < w.cols(); ++j) {
      out(i, j) = w(rows[i], cols[j]);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("hand-computed hypergraph entropies")
{
  Matrix w(2, 2);
  w << 1, 1, 1, 0;
  const auto inc = make_incidence(w);
  CHECK(he_vertex(inc).value == doctest::Approx(0.636514).epsilon(1e-6));
  CHECK(he_edge(inc).value == doctest::Approx(0.636514).epsilon(1e-6));
  CHECK(he_sym(inc, 0.5).value == doctest::Approx(0.918296).epsilon(1e-6));
  CHECK(he_sym(inc, 1.0).value == doctest::Approx(he_vertex(inc).value / std::log(2.0)));
}

TEST_CASE("regular and uniform incidences attain the bounds")
{
  const auto all = make_incidence(Matrix::Ones(4, 2));
  CHECK(he_vertex(all).value == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(he_edge(all).value == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  for (double gamma : {0.0, 0.3, 1.0}) {
    CHECK(he_sym(all, gamma).value == doctest::Approx(1.0).epsilon(1e-15));
  }
  // 2-regular, 2-uniform cycle hypergraph on 5 vertices.
  Matrix ring = Matrix::Zero(5, 5);
  for (Index e = 0; e < 5; ++e) {
    ring(e, e) = 1.0;
    ring((e + 1) % 5, e) = 1.0;
  }
  const auto c5 = make_incidence(ring);
  CHECK(he_vertex(c5).value == doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(he_edge(c5).value == doctest::Approx(std::log(5.0)).epsilon(1e-15));
}

TEST_CASE("single hyperedge and degenerate incidences")
{
  const auto one = make_incidence(Matrix::Ones(3, 1));
  CHECK(he_edge(one).value == 0.0);
  const auto s = he_sym(one);
  CHECK(s.degenerate);
  CHECK(s.value == doctest::Approx(1.0));
  const auto empty = make_incidence(Matrix::Zero(3, 2));
  CHECK(he_vertex(empty).degenerate);
  CHECK(he_sym(empty).degenerate);
  CHECK(he_sym(empty).value == 0.0);
  Matrix neg = Matrix::Ones(2, 2);
  neg(0, 1) = -1.0;
  CHECK_THROWS_AS(make_incidence(neg), InputError);
}

TEST_CASE("active sets")
{
  Matrix w = Matrix::Zero(4, 3);
  w(1, 0) = 1.0;
  w(3, 2) = 2.0;
  const auto inc = make_incidence(w);
  CHECK(inc.active_vertices == std::vector<Index>{1, 3});
  CHECK(inc.active_edges == std::vector<Index>{0, 2});
  CHECK(inc.total() == 3.0);
}

TEST_CASE("entropy bounds on random incidences")
{
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inc = make_incidence(random_binary(rng, 8, 5));
    if (inc.total() == 0.0) {
      continue;
    }
    const double hv = he_vertex(inc).value;
    const double he = he_edge(inc).value;
    CHECK(hv >= 0.0);
    CHECK(he >= 0.0);
    CHECK(hv <= std::log(static_cast<double>(inc.active_vertices.size())) + 1e-12);
    CHECK(he <= std::log(static_cast<double>(inc.active_edges.size())) + 1e-12);
  }
}

TEST_CASE("appending a hyperedge changes both entropies")
{
  std::mt19937_64 rng(52);
  int changed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Matrix w = random_binary(rng, 10, 4);
    Matrix col = random_binary(rng, 10, 1);
    if (col.sum() == 0.0) {
      col(0, 0) = 1.0;
    }
    Matrix wider(10, 5);
    wider << w, col;
    const auto a = make_incidence(w);
    const auto b = make_incidence(wider);
    const bool moved = std::abs(he_vertex(a).value - he_vertex(b).value) > 1e-12 &&
      std::abs(he_edge(a).value - he_edge(b).value) > 1e-12;
    changed += moved ? 1 : 0;
  }
  CHECK(changed >= 990);
}

TEST_CASE("entropies are invariant under relabeling")
{
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix w = random_binary(rng, 7, 5, 0.5);
    std::vector<Index> rows(7), cols(5);
    std::iota(rows.begin(), rows.end(), 0);
    std::iota(cols.begin(), cols.end(), 0);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    const auto a = make_incidence(w);
    const auto b = make_incidence(permuted(w, rows, cols));
    CHECK(std::abs(he_vertex(a).value - he_vertex(b).value) <= 1e-14);
    CHECK(std::abs(he_edge(a).value - he_edge(b).value) <= 1e-14);
    CHECK(std::abs(he_sym(a).value - he_sym(b).value) <= 1e-14);
    CHECK(std::abs(spectral_entropy(a).value - spectral_entropy(b).value) <= 1e-14);
  }
}

TEST_CASE("edge entropy is bounded by the number of cycles")
{
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 10; ++trial) {
    const Mtn net = build_mtn(make_cloud(oracle::random_points(rng, 40, 2)));
    const auto inc = make_incidence(net.incidence);
    if (net.num_cycles() == 0) {
      continue;
    }
    CHECK(he_edge(inc).value <= std::log(static_cast<double>(net.num_cycles())) + 1e-12);
  }
}

TEST_CASE("spectral entropy")
{
  CHECK(spectral_entropy(make_incidence(Matrix::Identity(2, 2))).value ==
    doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(spectral_entropy(make_incidence(Matrix::Ones(2, 1))).value) < 1e-14);
  CHECK(std::abs(spectral_entropy(make_incidence(Matrix::Ones(2, 2))).value) < 1e-14);
  CHECK(spectral_entropy(make_incidence(Matrix::Zero(2, 2))).degenerate);
}

TEST_CASE("cycle alignment")
{
  Matrix pe = Matrix::Zero(4, 4);
  pe(0, 0) = pe(1, 1) = pe(2, 2) = 1.0 / 3.0;
  CHECK(align_cycles(pe) == Matrix::Identity(3, 3));

  Matrix perm = Matrix::Zero(4, 4);
  perm(0, 2) = perm(1, 0) = perm(2, 1) = 1.0 / 3.0;
  const Matrix A = align_cycles(perm);
  CHECK(A(2, 0) == 1.0);
  CHECK(A(0, 1) == 1.0);
  CHECK(A(1, 2) == 1.0);
  CHECK(A.sum() == 3.0);
  CHECK(align_cycles(perm, true) == A);

  Matrix lost = Matrix::Zero(3, 3);
  lost(0, 0) = 0.5;
  lost(1, 2) = 0.5;
  lost(2, 1) = 0.5;
  const Matrix B = align_cycles(lost);
  CHECK(B.col(1).sum() == 0.0);
  CHECK(B(0, 0) == 1.0);
}

TEST_CASE("point-level field")
{
  // Reference cycle on all 4 vertices, target on 2 of 4.
  const Matrix ref = Matrix::Ones(4, 1);
  Matrix tgt = Matrix::Zero(4, 1);
  tgt(0, 0) = tgt(2, 0) = 1.0;
  const auto f = point_level_field(ref, tgt, Matrix::Identity(1, 1));
  CHECK(f.per_cycle_delta(0) == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(f.scores(0) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(f.scores(2) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(f.scores(1) == 0.0);
  CHECK(f.scores(3) == 0.0);

  const auto same = point_level_field(ref, ref, Matrix::Identity(1, 1));
  CHECK(same.scores.cwiseAbs().maxCoeff() == 0.0);

  const auto unmatched = point_level_field(ref, tgt, Matrix::Zero(1, 1));
  CHECK(unmatched.per_cycle_delta(0) == doctest::Approx(-1.0));
  CHECK(unmatched.scores.cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(point_level_field(Matrix::Ones(1, 1), tgt, Matrix::Identity(1, 1)),
    InputError);
}

TEST_CASE("field mass is bounded by the entropy changes")
{
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix ref = random_binary(rng, 9, 4, 0.5);
    const Matrix tgt = random_binary(rng, 7, 3, 0.5);
    const Matrix A = random_binary(rng, 3, 4, 0.3);
    const auto f = point_level_field(ref, tgt, A);
    CHECK(f.scores.minCoeff() >= 0.0);
    CHECK(f.scores.sum() <= f.per_cycle_delta.cwiseAbs().sum() + 1e-12);
  }
}
