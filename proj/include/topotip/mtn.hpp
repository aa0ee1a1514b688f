#ifndef TOPOTIP_MTN_HPP_
#define TOPOTIP_MTN_HPP_

#include "topotip/persistence.hpp"
#include "topotip/point_data.hpp"

namespace topotip
{

struct MtnConfig
{
  int hom_dim = 1;
  Index max_cycles = 20;
};

void validate(const MtnConfig & config);

/// Measure topological network ((X, k, mu), (Y, iota, nu), omega).
///
/// kernel: squared distances of the source cloud. diagram: M x 2 rows of
/// (birth, death) for the retained cycles. incidence: N x M, 1 where a
/// point lies on the cycle's representative. mu and nu are uniform; M may
/// be 0.
struct MeasureTopologicalNetwork
{
  SquaredDistanceMatrix kernel;
  Vector mu;
  Matrix diagram;
  Vector nu;
  Matrix incidence;
  PointCloud source_cloud;
  PersistenceDiagram cycles;  ///< the retained pairs, same order as diagram rows
  PersistenceDiagram barcode; ///< full H0/H1 diagram of the source cloud

  Index num_points() const {return mu.size();}
  Index num_cycles() const {return diagram.rows();}
};

using Mtn = MeasureTopologicalNetwork;

MeasureTopologicalNetwork build_mtn(const PointCloud & cloud, const MtnConfig & config = {});

}  // namespace topotip

#endif  // TOPOTIP_MTN_HPP_
