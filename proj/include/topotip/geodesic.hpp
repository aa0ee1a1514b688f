#ifndef TOPOTIP_GEODESIC_HPP_
#define TOPOTIP_GEODESIC_HPP_

#include "topotip/mtn.hpp"
#include "topotip/tpot.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace topotip
{

/// target[i] is the point of the second cloud matched to source point i.
struct Matching
{
  std::vector<Index> target;

  Index size() const {return static_cast<Index>(target.size());}
};

enum class MatchingMode { argmax, assignment };

/// Row-wise argmax of pi_v, lowest column on ties. A row without positive
/// mass throws NumericalError (the solve that produced pi_v failed).
Matching extract_matching(const Matrix & pi_v);

/// Maximum-mass one-to-one matching (Hungarian method). Needs rows <= cols.
Matching assignment_matching(const Matrix & weights);

Matching match(const Matrix & pi_v, MatchingMode mode);

/// k_t[i, j] = (1 - t) kA[i, j] + t kB[m(i), m(j)].
SquaredDistanceMatrix interpolate_sq_dist(const SquaredDistanceMatrix & kA,
  const SquaredDistanceMatrix & kB, const Matching & m, double t);

/// Classical MDS: B = -1/2 J k J, coordinates from the top-d eigenpairs
/// scaled by sqrt(max(lambda, 0)).
PointCloud classical_mds(const SquaredDistanceMatrix & k, Index d);

/// Rotation + translation of X closest to ref in summed squared error.
/// Reflections are excluded.
PointCloud procrustes_align(const PointCloud & X, const PointCloud & ref);

/// Point cloud at geodesic time t: matching, squared-distance blend, MDS
/// in the input dimension, then alignment to (1 - t) A + t B[m].
PointCloud reconstruct_frame(const PointCloud & cloudA, const PointCloud & cloudB,
  const Matrix & pi_v, double t, MatchingMode mode = MatchingMode::argmax);

/// Direct blend (1 - t) omegaA + t omegaB, columns padded with zeros to the
/// wider of the two. Not used by the pipeline; it is the naive alternative
/// the reconstruction replaces, kept for comparison.
Matrix blend_incidence(const Matrix & omegaA, const Matrix & omegaB, const Matching & m,
  double t);

// ---------------------------------------------------------------------------
// Indicator curves

struct IndicatorRow
{
  double tau = 0.0;
  double L_geom = 0.0;
  double L_topo = 0.0;
  double L_hyper = 0.0;
  double PE = 0.0;
  double HE_V = 0.0;
  double HE_E = 0.0;
  double HE_sym = 0.0;
  bool converged = true;
  Index n_cycles = 0;

  double objective = 0.0;          ///< alpha geom + (1 - alpha) topo + beta hyper
  double marginal_violation = 0.0; ///< worst over the row's Sinkhorn calls
  double max_h1_persistence = 0.0;
  bool entropy_degenerate = false; ///< fewer than two cycles or vertices
};

struct IndicatorTable
{
  std::vector<IndicatorRow> rows;
  /// Worst marginal error of the keyframe-pair solves (empty for baselines).
  std::vector<double> keyframe_violation;

  double max_marginal_violation() const;
  Index nonconverged() const;
};

enum class ReferenceMode { global, segment };

struct CurveOptions
{
  TpotConfig tpot;
  MtnConfig mtn;
  double gamma = 0.5;
  Index L = 13;
  MatchingMode matching = MatchingMode::argmax;
  ReferenceMode reference = ReferenceMode::global;
  std::uint64_t seed = 0;  ///< only used when frame sizes differ
};

void validate(const CurveOptions & options);

/// Indicator row for `frame` measured against the reference network.
IndicatorRow evaluate_frame(const Mtn & reference, const PointCloud & frame, double tau,
  const CurveOptions & options);

/// Interpolated indicator curves over the keyframes (indices into seq).
///
/// The first row is the first keyframe compared with itself (tau = 0).
/// Segment i then contributes L rows at tau = l / L, l = 1..L, mapped to
/// tau* = (i + tau - 1) / (T - 1). Segment ends (tau = 1) use the observed
/// keyframe; interior times use reconstruct_frame. (T - 1) L + 1 rows.
IndicatorTable dynamic_curves(const SequenceDataset & seq, const std::vector<Index> & keyframes,
  const CurveOptions & options = {});

/// Every frame against the first one, tau* = (i - 1) / (T - 1).
IndicatorTable baseline_curves(const SequenceDataset & seq, const CurveOptions & options = {});

/// `count` indices spread evenly over [0, frames - 1] (rounded).
std::vector<Index> even_keyframes(Index frames, Index count);

/// `tau,L_geom,L_topo,L_hyper,PE,HE_V,HE_E,HE_sym,converged,n_cycles`.
void save_indicator_csv(const IndicatorTable & table, const std::filesystem::path & path);
IndicatorTable load_indicator_csv(const std::filesystem::path & path);

/// Upper bound on worker threads: TOPOTIP_THREADS if set, else the
/// hardware concurrency (at least 1).
Index worker_threads();

}  // namespace topotip

#endif  // TOPOTIP_GEODESIC_HPP_
