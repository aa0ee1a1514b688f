#include "topotip/mtn.hpp"

namespace topotip
{

void validate(const MtnConfig & config)
{
  if (config.hom_dim != 1) {
    throw ConfigError("only hom_dim = 1 is supported");
  }
  if (config.max_cycles < 0) {
    throw ConfigError("max_cycles must be >= 0");
  }
}

MeasureTopologicalNetwork build_mtn(const PointCloud & cloud, const MtnConfig & config)
{
  validate(cloud);
  validate(config);

  MeasureTopologicalNetwork net;
  net.source_cloud = cloud;
  net.kernel = pairwise_sq_dist(cloud);
  const Index n = cloud.size();
  net.mu = Vector::Constant(n, 1.0 / static_cast<double>(n));

  net.barcode = rips_persistence(net.kernel);
  net.cycles = top_k_pairs(net.barcode, config.hom_dim, config.max_cycles);
  const auto m = static_cast<Index>(net.cycles.pairs.size());
  net.diagram.resize(m, 2);
  net.incidence = Matrix::Zero(n, m);
  for (Index j = 0; j < m; ++j) {
    const auto & pair = net.cycles.pairs[static_cast<std::size_t>(j)];
    net.diagram(j, 0) = pair.birth;
    net.diagram(j, 1) = pair.death;
    for (int v : pair.representative) {
      net.incidence(v, j) = 1.0;
    }
  }
  net.nu = m > 0 ? Vector::Constant(m, 1.0 / static_cast<double>(m)) : Vector();
  return net;
}

}  // namespace topotip
