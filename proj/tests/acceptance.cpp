// End-to-end acceptance runs. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails. Indicator tables are written to the
// directory given as the first argument (default: acceptance_out).

#include "oracles.hpp"

#include "topotip/entropy.hpp"
#include "topotip/geodesic.hpp"
#include "topotip/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace topotip;
namespace fs = std::filesystem;

namespace
{

constexpr std::uint64_t kSeed = 7;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict
{
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string & what)
  {
    pass = pass && ok;
    detail << (ok ? "" : "[x] ") << what << "; ";
  }
};

std::vector<double> column(const IndicatorTable & t, double IndicatorRow::* field)
{
  std::vector<double> out;
  for (const auto & r : t.rows) {
    out.push_back(r.*field);
  }
  return out;
}

// Index of the later row of the largest single-step absolute change.
std::size_t jump_index(const std::vector<double> & v)
{
  std::size_t best = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (std::abs(v[i] - v[i - 1]) > std::abs(v[best] - v[best - 1])) {
      best = i;
    }
  }
  return best;
}

std::vector<double> ranks(const std::vector<double> & v)
{
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {return v[a] < v[b];});
  std::vector<double> r(v.size());
  for (std::size_t k = 0; k < order.size(); ) {
    std::size_t e = k;
    while (e + 1 < order.size() && v[order[e + 1]] == v[order[k]]) {
      ++e;
    }
    for (std::size_t q = k; q <= e; ++q) {
      r[order[q]] = 0.5 * static_cast<double>(k + e);
    }
    k = e + 1;
  }
  return r;
}

double spearman(const std::vector<double> & a, const std::vector<double> & b)
{
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double max_of(const std::vector<double> & v)
{
  return *std::max_element(v.begin(), v.end());
}

void report(int id, const std::string & name, const Verdict & v)
{
  std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " <<
    v.detail.str() << std::endl;
}

Matrix binary(std::mt19937_64 & rng, Index n, Index m, double p)
{
  std::bernoulli_distribution coin(p);
  Matrix w(n, m);
  for (Index i = 0; i < w.size(); ++i) {
    w.data()[i] = coin(rng) ? 1.0 : 0.0;
  }
  return w;
}

// Shared state of the long runs.
struct Runs
{
  IndicatorTable rvp;
  IndicatorTable rvp_interp;
  IndicatorTable dwell;
  IndicatorTable dorsogna;
  std::vector<double> rvp_h;
  double rvp_seconds = 0.0;
};

Verdict criterion1(Runs & runs, const fs::path & out)
{
  const auto grid = linspace(-1.0, 1.0, 51);
  const auto t0 = Clock::now();
  const auto seq = make_sequence(PotentialKind::rvp, grid, 0.001, 200, kSeed);
  save_sequence(seq, out / "rvp_sequence.csv");
  runs.rvp = baseline_curves(seq);
  runs.rvp_seconds = seconds_since(t0);
  runs.rvp_h = grid;
  save_indicator_csv(runs.rvp, out / "rvp_baseline.csv");

  Verdict v;
  auto near_zero = [](double h) {return h >= -0.15 && h <= 0.15;};
  const double h_pe = grid[jump_index(column(runs.rvp, &IndicatorRow::PE))];
  const double h_he = grid[jump_index(column(runs.rvp, &IndicatorRow::HE_sym))];
  v.require(near_zero(h_pe), "PE jump at h=" + format_real(h_pe));
  v.require(near_zero(h_he), "HE_sym jump at h=" + format_real(h_he));

  const auto topo = column(runs.rvp, &IndicatorRow::L_topo);
  const auto peak = static_cast<std::size_t>(
    std::max_element(topo.begin(), topo.end()) - topo.begin());
  v.require(grid[peak] < 0.0, "L_topo max at h=" + format_real(grid[peak]));
  const std::vector<double> tail(topo.end() - 10, topo.end());
  const double lo = *std::min_element(tail.begin(), tail.end());
  const double hi = max_of(tail);
  const double spread = (hi - lo) / std::max(std::abs(hi), 1e-300);
  v.require(spread < 0.15, "L_topo plateau spread " + format_real(spread));
  v.require(runs.rvp_seconds < 1800.0, "runtime " + format_real(std::round(runs.rvp_seconds)) +
    " s");
  v.detail << runs.rvp.nonconverged() << " of " << runs.rvp.rows.size() <<
    " rows hit outer_iters";
  return v;
}

Verdict criterion2(Runs & runs, const fs::path & out)
{
  const auto seq = load_sequence(out / "rvp_sequence.csv");
  const auto keys = even_keyframes(seq.size(), 4);
  runs.rvp_interp = dynamic_curves(seq, keys);
  save_indicator_csv(runs.rvp_interp, out / "rvp_interp.csv");

  Verdict v;
  const double T = static_cast<double>(seq.size() - 1);
  for (auto [name, field] : {std::pair{"PE", &IndicatorRow::PE},
      std::pair{"HE_sym", &IndicatorRow::HE_sym}})
  {
    const double base = static_cast<double>(jump_index(column(runs.rvp, field))) / T;
    const double interp = runs.rvp_interp.rows[jump_index(column(runs.rvp_interp, field))].tau;
    // The table stores the global tau* in rows' tau field.
    v.require(std::abs(base - interp) <= 0.1, std::string(name) + " jump tau* baseline " +
      format_real(base) + " vs interpolated " + format_real(interp));
  }
  return v;
}

Verdict criterion3(Runs & runs, const fs::path & out)
{
  const auto seq = make_sequence(PotentialKind::double_well, linspace(1.0, -1.0, 51), 0.04, 200,
      kSeed);
  runs.dwell = baseline_curves(seq);
  save_indicator_csv(runs.dwell, out / "dwell_baseline.csv");

  Verdict v;
  for (auto [name, field] : {std::pair{"L_topo", &IndicatorRow::L_topo},
      std::pair{"L_hyper", &IndicatorRow::L_hyper}})
  {
    const double dw = max_of(column(runs.dwell, field));
    const double rvp = max_of(column(runs.rvp, field));
    v.require(dw < 0.05 * rvp, std::string(name) + " max " + format_real(dw) + " vs RVP " +
      format_real(rvp) + " (" + format_real(std::round(1000.0 * dw / rvp) / 10.0) + "%)");
  }
  std::vector<double> index(runs.dwell.rows.size());
  std::iota(index.begin(), index.end(), 0.0);
  const double rho = spearman(column(runs.dwell, &IndicatorRow::L_geom), index);
  v.require(rho > 0.9, "Spearman(L_geom, index) " + format_real(rho));
  return v;
}

Verdict criterion4(Runs & runs, const fs::path & out)
{
  const auto seq = simulate_dorsogna(DorsognaParams{}, kSeed);
  save_sequence(seq, out / "dorsogna_sequence.csv");
  runs.dorsogna = baseline_curves(seq);
  save_indicator_csv(runs.dorsogna, out / "dorsogna_baseline.csv");

  const auto he = column(runs.dorsogna, &IndicatorRow::HE_sym);
  const auto pers = column(runs.dorsogna, &IndicatorRow::max_h1_persistence);
  const std::size_t n = he.size();
  std::vector<double> he_mean, pers_median;
  for (std::size_t q = 0; q < 5; ++q) {
    const std::size_t a = q * n / 5;
    const std::size_t b = (q + 1) * n / 5;
    he_mean.push_back(std::accumulate(he.begin() + a, he.begin() + b, 0.0) /
      static_cast<double>(b - a));
    pers_median.push_back(median({pers.begin() + a, pers.begin() + b}));
  }
  Verdict v;
  const double drop = he_mean.front() - he_mean.back();
  v.require(drop >= 0.15, "HE_sym quintile means " + format_real(he_mean.front()) + " -> " +
    format_real(he_mean.back()) + " (drop " + format_real(drop) + ")");
  bool increasing = true;
  std::string medians;
  for (std::size_t q = 0; q < 5; ++q) {
    medians += (q ? "," : "") + format_real(pers_median[q]);
    if (q > 0 && !(pers_median[q] > pers_median[q - 1])) {
      increasing = false;
    }
  }
  v.require(increasing, "max H1 persistence quintile medians " + medians);
  return v;
}

Verdict criterion5(const Runs & runs)
{
  const auto t0 = Clock::now();
  std::mt19937_64 rng(kSeed);
  Verdict v;

  bool bounds = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inc = make_incidence(binary(rng, 9, 6, 0.4));
    if (inc.total() == 0.0) {
      continue;
    }
    const double hv = he_vertex(inc).value;
    const double he = he_edge(inc).value;
    bounds = bounds && hv >= 0.0 && he >= 0.0 &&
      hv <= std::log(static_cast<double>(inc.active_vertices.size())) + 1e-12 &&
      he <= std::log(static_cast<double>(inc.active_edges.size())) + 1e-12;
  }
  Matrix cyc = Matrix::Zero(6, 6);
  for (Index e = 0; e < 6; ++e) {
    cyc(e, e) = cyc((e + 1) % 6, e) = 1.0;
  }
  const auto reg = make_incidence(cyc);
  const auto full = make_incidence(Matrix::Ones(5, 3));
  const bool equality = std::abs(he_vertex(reg).value - std::log(6.0)) < 1e-14 &&
    std::abs(he_edge(reg).value - std::log(6.0)) < 1e-14 &&
    std::abs(he_vertex(full).value - std::log(5.0)) < 1e-14 &&
    std::abs(he_edge(full).value - std::log(3.0)) < 1e-14;
  v.require(bounds && equality, "bounds and equality cases");

  int changed = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix w = binary(rng, 10, 4, 0.4);
    Matrix col = binary(rng, 10, 1, 0.4);
    if (col.sum() == 0.0) {
      col(rng() % 10, 0) = 1.0;
    }
    Matrix wider(10, 5);
    wider << w, col;
    const auto a = make_incidence(w);
    const auto b = make_incidence(wider);
    changed += std::abs(he_vertex(a).value - he_vertex(b).value) > 1e-12 &&
      std::abs(he_edge(a).value - he_edge(b).value) > 1e-12;
  }
  v.require(changed >= 990, "sensitivity " + std::to_string(changed) + "/1000");

  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Matrix w = binary(rng, 8, 5, 0.5);
    std::vector<Index> rp(8), cp(5);
    std::iota(rp.begin(), rp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(rp.begin(), rp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    Matrix p(8, 5);
    for (Index i = 0; i < 8; ++i) {
      for (Index j = 0; j < 5; ++j) {
        p(i, j) = w(rp[i], cp[j]);
      }
    }
    const auto a = make_incidence(w);
    const auto b = make_incidence(p);
    worst = std::max({worst, std::abs(he_vertex(a).value - he_vertex(b).value),
        std::abs(he_edge(a).value - he_edge(b).value),
        std::abs(he_sym(a).value - he_sym(b).value),
        std::abs(spectral_entropy(a).value - spectral_entropy(b).value)});
  }
  v.require(worst <= 1e-14, "relabeling change " + format_real(worst));

  Index networks = 0;
  bool bound = true;
  for (const auto * t : {&runs.rvp, &runs.rvp_interp, &runs.dwell, &runs.dorsogna}) {
    for (const auto & r : t->rows) {
      ++networks;
      const double cap = r.n_cycles > 0 ? std::log(static_cast<double>(r.n_cycles)) : 0.0;
      bound = bound && r.HE_E <= cap + 1e-12;
    }
  }
  v.require(bound, "HE_E <= ln M on " + std::to_string(networks) + " networks");
  const double secs = seconds_since(t0);
  v.require(secs < 60.0, "runtime " + format_real(std::round(secs * 100.0) / 100.0) + " s");
  return v;
}

Verdict criterion6(const Runs & runs)
{
  Verdict v;
  double worst = 0.0;
  Index solves = 0;
  for (const auto * t : {&runs.rvp, &runs.rvp_interp, &runs.dwell, &runs.dorsogna}) {
    worst = std::max(worst, t->max_marginal_violation());
    solves += static_cast<Index>(t->rows.size() + t->keyframe_violation.size());
  }
  v.require(worst < 1e-6, "max marginal violation " + format_real(worst) + " over " +
    std::to_string(solves) + " solves");

  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<Index> points(1, 4);
  std::uniform_int_distribution<Index> cycles(0, 2);
  double gap = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Mtn P = oracle::random_mtn(rng, points(rng), cycles(rng));
    const Mtn Q = oracle::random_mtn(rng, points(rng), cycles(rng));
    CouplingPair c;
    c.pi_v = oracle::random_coupling(rng, P.mu, Q.mu);
    c.pi_e = oracle::random_coupling(rng,
        augmented_cycle_measure(P.num_cycles(), Q.num_cycles()),
        augmented_cycle_measure(Q.num_cycles(), P.num_cycles()));
    const auto fast = evaluate_distortions(P, Q, c);
    const auto slow = oracle::naive_distortions(P, Q, c, 0.5, 1.0);
    gap = std::max({gap, std::abs(fast.geom - slow.geom), std::abs(fast.topo - slow.topo),
        std::abs(fast.hyper - slow.hyper)});
  }
  v.require(gap <= 1e-10, "distortion oracle gap " + format_real(gap));

  const TpotConfig cfg;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double self = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Matrix X(20 + 2 * trial, 2);
    for (Index i = 0; i < X.size(); ++i) {
      X.data()[i] = u(rng);
    }
    const Mtn P = build_mtn(make_cloud(X));
    self = std::max(self, solve_tpot(P, P, cfg).distortion.objective);
  }
  v.require(self <= 10.0 * cfg.eps_v, "worst self-distance " + format_real(self));
  return v;
}

Verdict criterion7()
{
  Verdict v;
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<Index> size(3, 7);
  int agree = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto D = pairwise_sq_dist(make_cloud(oracle::random_points(rng, size(rng), 2)));
    agree += oracle::as_pairs(compute_persistence(build_vr_filtration(D, 2))) ==
      oracle::naive_persistence(D.values);
  }
  v.require(agree == 50, std::to_string(agree) + "/50 configurations agree");
  Matrix sq(4, 2);
  sq << 0, 0, 1, 0, 1, 1, 0, 1;
  const auto h1 = compute_persistence(build_vr_filtration(pairwise_sq_dist(make_cloud(sq)), 2))
    .in_dim(1);
  v.require(h1.size() == 1 && std::abs(h1[0].birth - 1.0) < 1e-12 &&
    std::abs(h1[0].death - std::sqrt(2.0)) < 1e-12, "unit square (1, sqrt 2)");
  return v;
}

Verdict criterion8()
{
  Verdict v;
  std::mt19937_64 rng(kSeed);
  double endpoint = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto A = make_cloud(oracle::random_points(rng, 15, 2));
    const auto B = make_cloud(oracle::random_points(rng, 15, 2));
    std::vector<Index> perm(15);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pi = Matrix::Zero(15, 15);
    for (Index i = 0; i < 15; ++i) {
      pi(i, perm[i]) = 1.0 / 15.0;
    }
    const auto kA = pairwise_sq_dist(A);
    const auto kB1 = interpolate_sq_dist(kA, pairwise_sq_dist(B), Matching{perm}, 1.0);
    endpoint = std::max({endpoint,
        (pairwise_sq_dist(reconstruct_frame(A, B, pi, 0.0)).values - kA.values)
        .cwiseAbs().maxCoeff(),
        (pairwise_sq_dist(reconstruct_frame(A, B, pi, 1.0)).values - kB1.values)
        .cwiseAbs().maxCoeff()});
  }
  v.require(endpoint < 1e-8, "endpoint error " + format_real(endpoint));
  double mds = 0.0;
  for (Index d : {1, 2, 3, 4}) {
    const auto D = pairwise_sq_dist(make_cloud(oracle::random_points(rng, 25, d)));
    mds = std::max(mds, (pairwise_sq_dist(classical_mds(D, d)).values - D.values).norm());
  }
  v.require(mds < 1e-8, "MDS round trip " + format_real(mds));
  return v;
}

}  // namespace

int main(int argc, char ** argv)
{
  const fs::path out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(out);
  Runs runs;
  int failures = 0;
  auto run = [&](int id, const std::string & name, const std::function<Verdict()> & body) {
      const auto t0 = Clock::now();
      Verdict v;
      try {
        v = body();
      } catch (const std::exception & e) {
        v.require(false, std::string("exception: ") + e.what());
      }
      v.detail << "[" << std::round(seconds_since(t0)) << " s]";
      report(id, name, v);
      failures += v.pass ? 0 : 1;
    };
  run(1, "RVP tipping localization", [&] {return criterion1(runs, out);});
  run(2, "RVP interpolation fidelity", [&] {return criterion2(runs, out);});
  run(3, "double-well negative control", [&] {return criterion3(runs, out);});
  run(4, "D'Orsogna entropy drop", [&] {return criterion4(runs, out);});
  run(5, "entropy theorem suite", [&] {return criterion5(runs);});
  run(6, "solver correctness", [&] {return criterion6(runs);});
  run(7, "persistence oracle", [] {return criterion7();});
  run(8, "geodesic endpoints", [] {return criterion8();});
  std::cout << (8 - failures) << "/8 criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
