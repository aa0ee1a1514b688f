#ifndef TOPOTIP_PERSISTENCE_HPP_
#define TOPOTIP_PERSISTENCE_HPP_

#include "topotip/point_data.hpp"

#include <array>
#include <filesystem>
#include <limits>
#include <vector>

namespace topotip
{

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// A vertex, edge or triangle. Unused vertex slots hold -1; used slots are
/// strictly increasing.
struct Simplex
{
  std::array<int, 3> vertices{-1, -1, -1};
  int dim = 0;
  double value = 0.0;
};

/// Simplices in the total order (value, dim, lexicographic vertex tuple).
struct Filtration
{
  Index num_vertices = 0;
  std::vector<Simplex> simplices;
};

/// Vietoris-Rips filtration up to dimension `max_dim` (1 or 2). An edge
/// enters at the Euclidean length sqrt(D(i, j)), a triangle at its longest
/// edge. Only simplices with value <= threshold are kept; +inf keeps all.
Filtration build_vr_filtration(const SquaredDistanceMatrix & D, int max_dim,
  double threshold = kInfinity);

/// min_i max_j sqrt(D(i, j)). From this scale on the Rips complex is a cone,
/// so no finite-persistence H0/H1 feature can be born or die beyond it.
double enclosing_radius(const SquaredDistanceMatrix & D);

struct PersistencePair
{
  int dim = 0;
  double birth = 0.0;
  double death = kInfinity;
  /// Sorted vertex support of the representative cycle (finite H1 pairs).
  std::vector<int> representative;

  bool finite() const {return death < kInfinity;}
  double persistence() const {return death - birth;}
};

struct PersistenceDiagram
{
  std::vector<PersistencePair> pairs;

  std::vector<PersistencePair> in_dim(int dim) const;
  Index finite_count(int dim) const;
  /// Largest finite death - birth in `dim`, 0 when there is none.
  double max_persistence(int dim) const;
};

/// Z/2 persistent homology in dimensions 0 and 1.
///
/// Dimension 0 uses union-find with the elder rule, which produces the
/// same pairing as reducing the edge columns. Dimension 1 reduces the
/// triangle columns left to right; a column whose pivot edge is still free
/// is already reduced and is paired without any addition. Reduction stops
/// once every cycle-creating edge has been paired. Zero-persistence pairs
/// are dropped. The representative of a finite H1 pair is the vertex
/// support of the reduced column of its death triangle.
PersistenceDiagram compute_persistence(const Filtration & filtration);

/// Rips persistence (H0, H1) of a squared-distance matrix, truncated at the
/// enclosing radius. Matches the untruncated diagram exactly once
/// zero-persistence pairs are removed.
PersistenceDiagram rips_persistence(const SquaredDistanceMatrix & D);

/// The k finite pairs of dimension `dim` with the largest persistence; ties
/// go to the earlier birth, then to the smaller lowest representative vertex.
PersistenceDiagram top_k_pairs(const PersistenceDiagram & diagram, int dim, Index k);

/// Shannon entropy (natural log) of the normalized finite bar lengths in
/// `dim`. Infinite bars are skipped. No finite bar: 0, flagged degenerate.
Measured persistence_entropy(const PersistenceDiagram & diagram, int dim);

/// `dim,birth,death,representative` with ';'-joined vertex ids.
void save_diagram_csv(const PersistenceDiagram & diagram, const std::filesystem::path & path);

}  // namespace topotip

#endif  // TOPOTIP_PERSISTENCE_HPP_
