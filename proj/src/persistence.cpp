#include "topotip/persistence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace topotip
{

namespace
{

bool filtration_less(const Simplex & a, const Simplex & b)
{
  if (a.value != b.value) {
    return a.value < b.value;
  }
  if (a.dim != b.dim) {
    return a.dim < b.dim;
  }
  return a.vertices < b.vertices;
}

struct UnionFind
{
  std::vector<int> parent;
  std::vector<int> oldest;  // filtration rank of the component's oldest vertex

  explicit UnionFind(std::size_t n)
  : parent(n), oldest(n)
  {
    std::iota(parent.begin(), parent.end(), 0);
  }

  int find(int x)
  {
    while (parent[static_cast<std::size_t>(x)] != x) {
      auto & p = parent[static_cast<std::size_t>(x)];
      p = parent[static_cast<std::size_t>(p)];
      x = p;
    }
    return x;
  }
};

void toggle_into(const std::vector<int> & add, std::vector<int> & col, std::vector<int> & scratch)
{
  scratch.clear();
  std::set_symmetric_difference(col.begin(), col.end(), add.begin(), add.end(),
    std::back_inserter(scratch));
  col.swap(scratch);
}

}  // namespace

Filtration build_vr_filtration(const SquaredDistanceMatrix & D, int max_dim, double threshold)
{
  if (max_dim < 1 || max_dim > 2) {
    throw ConfigError("max_dim must be 1 or 2");
  }
  if (!(threshold > 0.0)) {
    throw ConfigError("filtration threshold must be > 0");
  }
  const Index n = D.size();
  Filtration f;
  f.num_vertices = n;

  Matrix len(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      len(i, j) = std::sqrt(std::max(D.values(i, j), 0.0));
    }
  }

  for (int i = 0; i < n; ++i) {
    f.simplices.push_back({{i, -1, -1}, 0, 0.0});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (len(i, j) <= threshold) {
        f.simplices.push_back({{i, j, -1}, 1, len(i, j)});
      }
    }
  }
  if (max_dim >= 2) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double ij = len(i, j);
        if (ij > threshold) {
          continue;
        }
        for (int k = j + 1; k < n; ++k) {
          const double v = std::max({ij, len(i, k), len(j, k)});
          if (v <= threshold) {
            f.simplices.push_back({{i, j, k}, 2, v});
          }
        }
      }
    }
  }
  std::sort(f.simplices.begin(), f.simplices.end(), filtration_less);
  return f;
}

double enclosing_radius(const SquaredDistanceMatrix & D)
{
  if (D.size() == 0) {
    return 0.0;
  }
  return std::sqrt(std::max(D.values.rowwise().maxCoeff().minCoeff(), 0.0));
}

std::vector<PersistencePair> PersistenceDiagram::in_dim(int dim) const
{
  std::vector<PersistencePair> out;
  std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
    [dim](const PersistencePair & p) {return p.dim == dim;});
  return out;
}

Index PersistenceDiagram::finite_count(int dim) const
{
  return std::count_if(pairs.begin(), pairs.end(),
           [dim](const PersistencePair & p) {return p.dim == dim && p.finite();});
}

double PersistenceDiagram::max_persistence(int dim) const
{
  double best = 0.0;
  for (const auto & p : pairs) {
    if (p.dim == dim && p.finite()) {
      best = std::max(best, p.persistence());
    }
  }
  return best;
}

PersistenceDiagram compute_persistence(const Filtration & filtration)
{
  const auto n = static_cast<std::size_t>(filtration.num_vertices);
  PersistenceDiagram diagram;

  std::vector<int> vertex_rank(n, -1);
  std::vector<int> edge_of(n * n, -1);  // (a, b) -> edge rank
  std::vector<std::array<int, 2>> edge_vertices;
  std::vector<double> edge_value;
  std::vector<std::size_t> triangles;
  int rank = 0;
  for (std::size_t s = 0; s < filtration.simplices.size(); ++s) {
    const Simplex & sx = filtration.simplices[s];
    if (sx.dim == 0) {
      vertex_rank[static_cast<std::size_t>(sx.vertices[0])] = rank++;
    } else if (sx.dim == 1) {
      const auto a = static_cast<std::size_t>(sx.vertices[0]);
      const auto b = static_cast<std::size_t>(sx.vertices[1]);
      edge_of[a * n + b] = static_cast<int>(edge_vertices.size());
      edge_of[b * n + a] = static_cast<int>(edge_vertices.size());
      edge_vertices.push_back({sx.vertices[0], sx.vertices[1]});
      edge_value.push_back(sx.value);
    } else if (sx.dim == 2) {
      triangles.push_back(s);
    }
  }

  // H0: elder rule over the edges in filtration order.
  UnionFind uf(n);
  for (std::size_t v = 0; v < n; ++v) {
    uf.oldest[v] = vertex_rank[v];
  }
  std::vector<char> creates_cycle(edge_vertices.size(), 0);
  std::size_t cycle_edges = 0;
  for (std::size_t e = 0; e < edge_vertices.size(); ++e) {
    const int ra = uf.find(edge_vertices[e][0]);
    const int rb = uf.find(edge_vertices[e][1]);
    if (ra == rb) {
      creates_cycle[e] = 1;
      ++cycle_edges;
      continue;
    }
    const bool a_older = uf.oldest[static_cast<std::size_t>(ra)] <
      uf.oldest[static_cast<std::size_t>(rb)];
    const int elder = a_older ? ra : rb;
    const int younger = a_older ? rb : ra;
    if (edge_value[e] > 0.0) {
      diagram.pairs.push_back({0, 0.0, edge_value[e], {}});
    }
    uf.parent[static_cast<std::size_t>(younger)] = elder;
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (uf.find(static_cast<int>(v)) == static_cast<int>(v)) {
      diagram.pairs.push_back({0, 0.0, kInfinity, {}});
    }
  }

  // H1: reduce triangle columns (edge ranks, ascending; pivot = back()).
  std::vector<int> owner(edge_vertices.size(), -1);
  std::vector<std::vector<int>> reduced;
  std::vector<int> col;
  std::vector<int> scratch;
  std::size_t paired = 0;
  for (std::size_t t = 0; t < triangles.size() && paired < cycle_edges; ++t) {
    const Simplex & tri = filtration.simplices[triangles[t]];
    const auto a = static_cast<std::size_t>(tri.vertices[0]);
    const auto b = static_cast<std::size_t>(tri.vertices[1]);
    const auto c = static_cast<std::size_t>(tri.vertices[2]);
    col = {edge_of[a * n + b], edge_of[a * n + c], edge_of[b * n + c]};
    if (col[0] < 0 || col[1] < 0 || col[2] < 0) {
      throw InputError("filtration contains a triangle before one of its edges");
    }
    std::sort(col.begin(), col.end());
    while (!col.empty() && owner[static_cast<std::size_t>(col.back())] >= 0) {
      toggle_into(reduced[static_cast<std::size_t>(owner[static_cast<std::size_t>(col.back())])],
        col, scratch);
    }
    if (col.empty()) {
      continue;
    }
    const auto pivot = static_cast<std::size_t>(col.back());
    owner[pivot] = static_cast<int>(reduced.size());
    ++paired;
    if (tri.value > edge_value[pivot]) {
      PersistencePair pair{1, edge_value[pivot], tri.value, {}};
      for (int e : col) {
        pair.representative.push_back(edge_vertices[static_cast<std::size_t>(e)][0]);
        pair.representative.push_back(edge_vertices[static_cast<std::size_t>(e)][1]);
      }
      std::sort(pair.representative.begin(), pair.representative.end());
      pair.representative.erase(
        std::unique(pair.representative.begin(), pair.representative.end()),
        pair.representative.end());
      diagram.pairs.push_back(std::move(pair));
    }
    reduced.push_back(col);
  }
  if (paired < cycle_edges) {
    for (std::size_t e = 0; e < edge_vertices.size(); ++e) {
      if (creates_cycle[e] && owner[e] < 0) {
        diagram.pairs.push_back({1, edge_value[e], kInfinity, {}});
      }
    }
  }
  return diagram;
}

PersistenceDiagram rips_persistence(const SquaredDistanceMatrix & D)
{
  if (D.size() <= 1) {
    return compute_persistence(build_vr_filtration(D, 2, kInfinity));
  }
  const double radius = enclosing_radius(D);
  // All points coincide: nothing but zero-length features.
  const double threshold = radius > 0.0 ? radius : kInfinity;
  return compute_persistence(build_vr_filtration(D, 2, threshold));
}

PersistenceDiagram top_k_pairs(const PersistenceDiagram & diagram, int dim, Index k)
{
  if (k < 0) {
    throw ConfigError("k must be >= 0");
  }
  std::vector<PersistencePair> finite;
  for (const auto & p : diagram.pairs) {
    if (p.dim == dim && p.finite()) {
      finite.push_back(p);
    }
  }
  auto lowest = [](const PersistencePair & p) {
      return p.representative.empty() ? -1 : p.representative.front();
    };
  std::stable_sort(finite.begin(), finite.end(),
    [&](const PersistencePair & a, const PersistencePair & b) {
      if (a.persistence() != b.persistence()) {
        return a.persistence() > b.persistence();
      }
      if (a.birth != b.birth) {
        return a.birth < b.birth;
      }
      return lowest(a) < lowest(b);
    });
  if (static_cast<Index>(finite.size()) > k) {
    finite.resize(static_cast<std::size_t>(k));
  }
  return {std::move(finite)};
}

Measured persistence_entropy(const PersistenceDiagram & diagram, int dim)
{
  double total = 0.0;
  std::vector<double> lengths;
  for (const auto & p : diagram.pairs) {
    if (p.dim == dim && p.finite() && p.persistence() > 0.0) {
      lengths.push_back(p.persistence());
      total += p.persistence();
    }
  }
  if (lengths.empty()) {
    return {0.0, true};
  }
  double h = 0.0;
  for (double l : lengths) {
    const double q = l / total;
    h -= q * std::log(q);
  }
  return {h, false};
}

void save_diagram_csv(const PersistenceDiagram & diagram, const std::filesystem::path & path)
{
  std::vector<std::string> rows;
  for (const auto & p : diagram.pairs) {
    std::string rep;
    for (std::size_t i = 0; i < p.representative.size(); ++i) {
      rep += (i ? ";" : "") + std::to_string(p.representative[i]);
    }
    rows.push_back(std::to_string(p.dim) + "," + format_real(p.birth) + "," +
      (p.finite() ? format_real(p.death) : std::string("inf")) + "," + rep);
  }
  write_csv(path, "dim,birth,death,representative", rows);
}

}  // namespace topotip
