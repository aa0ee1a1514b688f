#ifndef TOPOTIP_POINT_DATA_HPP_
#define TOPOTIP_POINT_DATA_HPP_

#include "topotip/types.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace topotip
{

/// Ordered set of N points in R^d. `labels` is either empty or holds one
/// region id per point.
struct PointCloud
{
  Matrix coords;
  std::optional<double> frame_param;
  std::vector<int> labels;

  Index size() const {return coords.rows();}
  Index dim() const {return coords.cols();}
  bool has_labels() const {return !labels.empty();}
};

/// Throws InputError unless N >= 1, d >= 1, coordinates are finite and the
/// label vector (if any) has one entry per point.
void validate(const PointCloud & cloud);

PointCloud make_cloud(Matrix coords, std::optional<double> frame_param = std::nullopt);

/// Pairwise squared Euclidean distances (also used as the MTN kernel).
struct SquaredDistanceMatrix
{
  Matrix values;

  Index size() const {return values.rows();}
  double max() const {return values.size() == 0 ? 0.0 : values.maxCoeff();}
};

struct SequenceDataset
{
  std::vector<PointCloud> frames;

  Index size() const {return static_cast<Index>(frames.size());}
  Index dim() const {return frames.empty() ? 0 : frames.front().dim();}
  std::vector<double> params() const;
};

/// Throws SchemaError unless every frame is valid and all share d.
void validate(const SequenceDataset & seq);

SquaredDistanceMatrix pairwise_sq_dist(const PointCloud & cloud);

/// exp(-|x - x'|^2 / sigma^2). Exposed for experimentation; the pipeline
/// uses squared distances.
Matrix gaussian_affinity(const PointCloud & cloud, double sigma);

/// m <= N: ordered uniform subsample without replacement (m == N returns
/// the input). m > N: uniform draws with replacement. Labels follow points.
PointCloud resample(const PointCloud & cloud, Index m, std::uint64_t seed);

/// Zero mean, unit variance per coordinate (constant coordinates are only
/// centred).
PointCloud standardize(const PointCloud & cloud);

/// Points carrying the given label, in input order.
PointCloud select_label(const PointCloud & cloud, int label);

enum class SequenceFormat { csv };

/// Reads `frame,id,x0,...,x{d-1}[,label][,param]`. Frames are returned in
/// ascending frame order, points in ascending id order.
SequenceDataset load_sequence(const std::filesystem::path & path,
  SequenceFormat format = SequenceFormat::csv);

void save_sequence(const SequenceDataset & seq, const std::filesystem::path & path);

/// Shortest round-trip decimal form used by every CSV writer.
std::string format_real(double value);

/// Writes header + rows, replacing `path` atomically (temp file + rename).
void write_csv(const std::filesystem::path & path, const std::string & header,
  const std::vector<std::string> & rows);

}  // namespace topotip

#endif  // TOPOTIP_POINT_DATA_HPP_
