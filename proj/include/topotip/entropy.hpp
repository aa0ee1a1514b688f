#ifndef TOPOTIP_ENTROPY_HPP_
#define TOPOTIP_ENTROPY_HPP_

#include "topotip/point_data.hpp"

#include <filesystem>
#include <vector>

namespace topotip
{

/// Hypergraph incidence omega (n vertices x m hyperedges, entries >= 0)
/// together with its active vertex set V* (row sum > 0) and active
/// hyperedge set E* (column sum > 0).
struct IncidenceMatrix
{
  Matrix omega;
  std::vector<Index> active_vertices;
  std::vector<Index> active_edges;

  /// I_total, the sum of all incidence weights.
  double total() const {return omega.sum();}
};

/// Throws InputError on negative or non-finite weights.
IncidenceMatrix make_incidence(Matrix omega);

/// -sum_{v in V*} (L(v) / I) ln(L(v) / I) with L(v) the weighted degree.
/// I_total = 0: value 0, flagged degenerate.
Measured he_vertex(const IncidenceMatrix & inc);

/// Same with hyperedge sizes S(e) in place of degrees.
Measured he_edge(const IncidenceMatrix & inc);

/// gamma HE_V / ln|V*| + (1 - gamma) HE_E / ln|E*|.
///
/// A set of size 1 makes its term 0/0; that term is taken as 1 (a single
/// element is trivially uniform) and the result is flagged degenerate.
/// An empty incidence gives 0, flagged degenerate.
Measured he_sym(const IncidenceMatrix & inc, double gamma = 0.5);

/// Shannon entropy (bits) of the trace-normalized spectrum of omega omega^T.
/// Eigenvalues below 1e-12 trace count as zero. Zero trace: 0, degenerate.
Measured spectral_entropy(const IncidenceMatrix & inc);

/// m' x m binary matrix A aligning target cycles to reference cycles.
///
/// pi_e is the augmented cycle coupling ((m+1) x (m'+1)): rows are
/// reference cycles, columns target cycles, the last row/column the
/// diagonal slots. Reference cycle j gets the target cycle holding most of
/// its mass (lowest index on ties); if that is the diagonal slot, column j
/// of A is zero. With `exact` the real-to-real block is instead solved as
/// a maximum-mass assignment, and cycles the argmax sends to the diagonal
/// stay unmatched.
Matrix align_cycles(const Matrix & pi_e, bool exact = false);

struct EntropyField
{
  Vector scores;          ///< s, one per target vertex
  Vector per_cycle_delta; ///< Delta H, one per reference cycle
  Vector reference_entropy;
  Vector target_entropy;
};

/// Column-normalize omega_ref (n x m) and omega_tgt A (n' x m) with `eps`
/// added to each denominator, take per-column entropies normalized by
/// ln n and ln n', and spread |Delta H| over target vertices: s = P_hat |Delta H|.
/// Throws InputError when n or n' is 1 (the normalizer vanishes) or shapes
/// disagree.
EntropyField point_level_field(const Matrix & omega_ref, const Matrix & omega_tgt,
  const Matrix & A, double eps = 1e-12);

/// `point_id,x0,...,x{d-1},score`.
void save_field_csv(const PointCloud & cloud, const EntropyField & field,
  const std::filesystem::path & path);

}  // namespace topotip

#endif  // TOPOTIP_ENTROPY_HPP_
