#include "topotip/point_data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace topotip
{

void validate(const PointCloud & cloud)
{
  if (cloud.size() < 1) {
    throw InputError("point cloud is empty");
  }
  if (cloud.dim() < 1) {
    throw InputError("point cloud has zero dimension");
  }
  if (!cloud.coords.allFinite()) {
    throw InputError("point cloud has non-finite coordinates");
  }
  if (cloud.has_labels() && static_cast<Index>(cloud.labels.size()) != cloud.size()) {
    throw InputError("label count does not match point count");
  }
}

PointCloud make_cloud(Matrix coords, std::optional<double> frame_param)
{
  PointCloud cloud{std::move(coords), frame_param, {}};
  validate(cloud);
  return cloud;
}

std::vector<double> SequenceDataset::params() const
{
  std::vector<double> out;
  out.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    out.push_back(frames[i].frame_param.value_or(static_cast<double>(i)));
  }
  return out;
}

void validate(const SequenceDataset & seq)
{
  if (seq.frames.empty()) {
    throw SchemaError("sequence has no frames");
  }
  const Index d = seq.frames.front().dim();
  for (const auto & frame : seq.frames) {
    validate(frame);
    if (frame.dim() != d) {
      throw SchemaError("frames disagree on point dimension");
    }
  }
}

SquaredDistanceMatrix pairwise_sq_dist(const PointCloud & cloud)
{
  const Matrix & X = cloud.coords;
  const Index n = X.rows();
  Matrix D(n, n);
  for (Index i = 0; i < n; ++i) {
    D(i, i) = 0.0;
    for (Index j = i + 1; j < n; ++j) {
      const double v = (X.row(i) - X.row(j)).squaredNorm();
      D(i, j) = v;
      D(j, i) = v;
    }
  }
  return {std::move(D)};
}

Matrix gaussian_affinity(const PointCloud & cloud, double sigma)
{
  if (!(sigma > 0.0)) {
    throw ConfigError("gaussian affinity needs sigma > 0");
  }
  return (-pairwise_sq_dist(cloud).values.array() / (sigma * sigma)).exp().matrix();
}

PointCloud resample(const PointCloud & cloud, Index m, std::uint64_t seed)
{
  if (m < 1) {
    throw ConfigError("resample size must be >= 1");
  }
  const Index n = cloud.size();
  std::vector<Index> picks;
  picks.reserve(static_cast<std::size_t>(m));
  std::mt19937_64 rng(seed);
  if (m <= n) {
    std::vector<Index> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), Index{0});
    std::sample(all.begin(), all.end(), std::back_inserter(picks), m, rng);
  } else {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (Index k = 0; k < m; ++k) {
      picks.push_back(pick(rng));
    }
  }

  PointCloud out;
  out.coords.resize(m, cloud.dim());
  out.frame_param = cloud.frame_param;
  for (Index k = 0; k < m; ++k) {
    const Index src = picks[static_cast<std::size_t>(k)];
    out.coords.row(k) = cloud.coords.row(src);
    if (cloud.has_labels()) {
      out.labels.push_back(cloud.labels[static_cast<std::size_t>(src)]);
    }
  }
  return out;
}

PointCloud standardize(const PointCloud & cloud)
{
  PointCloud out = cloud;
  const Eigen::RowVectorXd mean = cloud.coords.colwise().mean();
  out.coords.rowwise() -= mean;
  for (Index c = 0; c < out.dim(); ++c) {
    const double var = out.coords.col(c).squaredNorm() / static_cast<double>(out.size());
    if (var > 0.0) {
      out.coords.col(c) /= std::sqrt(var);
    }
  }
  return out;
}

PointCloud select_label(const PointCloud & cloud, int label)
{
  std::vector<Index> rows;
  for (std::size_t i = 0; i < cloud.labels.size(); ++i) {
    if (cloud.labels[i] == label) {
      rows.push_back(static_cast<Index>(i));
    }
  }
  PointCloud out;
  out.frame_param = cloud.frame_param;
  out.coords.resize(static_cast<Index>(rows.size()), cloud.dim());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    out.coords.row(static_cast<Index>(k)) = cloud.coords.row(rows[k]);
    out.labels.push_back(label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace
{

std::vector<std::string> split_fields(const std::string & line)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string{} : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

double parse_real(const std::string & s, std::size_t line, const std::string & column)
{
  if (s.empty()) {
    throw ParseError(line, "empty value in column '" + column + "'");
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw ParseError(line, "non-numeric value '" + s + "' in column '" + column + "'");
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw ParseError(line, "non-numeric value '" + s + "' in column '" + column + "'");
  }
  return v;
}

long long parse_integer(const std::string & s, std::size_t line, const std::string & column)
{
  const double v = parse_real(s, line, column);
  if (v != std::floor(v)) {
    throw ParseError(line, "non-integer value '" + s + "' in column '" + column + "'");
  }
  return static_cast<long long>(v);
}

struct RawRow
{
  long long id;
  std::vector<double> x;
  int label;
  std::optional<double> param;
  std::size_t line;
};

}  // namespace

SequenceDataset load_sequence(const std::filesystem::path & path, SequenceFormat format)
{
  if (format != SequenceFormat::csv) {
    throw ConfigError("unsupported sequence format");
  }
  std::ifstream in(path);
  if (!in) {
    throw InputError("cannot open " + path.string());
  }

  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      header = split_fields(line);
      break;
    }
  }
  if (header.size() < 3 || header[0] != "frame" || header[1] != "id") {
    throw SchemaError("header must start with 'frame,id,x0'");
  }
  std::size_t d = 0;
  while (2 + d < header.size() && header[2 + d] == "x" + std::to_string(d)) {
    ++d;
  }
  if (d == 0) {
    throw SchemaError("header has no coordinate columns");
  }
  std::optional<std::size_t> label_col;
  std::optional<std::size_t> param_col;
  for (std::size_t c = 2 + d; c < header.size(); ++c) {
    if (header[c] == "label" && !label_col && !param_col) {
      label_col = c;
    } else if (header[c] == "param" && !param_col) {
      param_col = c;
    } else {
      throw SchemaError("unexpected column '" + header[c] + "'");
    }
  }

  std::map<long long, std::vector<RawRow>> grouped;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw SchemaError("line " + std::to_string(line_no) + ": expected " +
              std::to_string(header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    RawRow row;
    row.line = line_no;
    const long long frame = parse_integer(fields[0], line_no, "frame");
    row.id = parse_integer(fields[1], line_no, "id");
    row.x.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      row.x[k] = parse_real(fields[2 + k], line_no, header[2 + k]);
    }
    row.label = label_col ? static_cast<int>(parse_integer(fields[*label_col], line_no, "label")) : 0;
    if (param_col) {
      row.param = parse_real(fields[*param_col], line_no, "param");
    }
    grouped[frame].push_back(std::move(row));
  }
  if (grouped.empty()) {
    throw SchemaError("sequence file has no data rows");
  }

  SequenceDataset seq;
  for (auto & [frame, rows] : grouped) {
    std::stable_sort(rows.begin(), rows.end(),
      [](const RawRow & a, const RawRow & b) {return a.id < b.id;});
    PointCloud cloud;
    cloud.coords.resize(static_cast<Index>(rows.size()), static_cast<Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        cloud.coords(static_cast<Index>(i), static_cast<Index>(k)) = rows[i].x[k];
      }
      if (label_col) {
        cloud.labels.push_back(rows[i].label);
      }
      if (rows[i].param) {
        if (cloud.frame_param && *cloud.frame_param != *rows[i].param) {
          throw SchemaError("line " + std::to_string(rows[i].line) + ": frame " +
                  std::to_string(frame) + " has inconsistent param values");
        }
        cloud.frame_param = rows[i].param;
      }
    }
    seq.frames.push_back(std::move(cloud));
  }
  validate(seq);
  return seq;
}

std::string format_real(double value)
{
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const std::filesystem::path & path, const std::string & header,
  const std::vector<std::string> & rows)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) {
      throw InputError("cannot write " + path.string());
    }
    out << header << '\n';
    for (const auto & r : rows) {
      out << r << '\n';
    }
    if (!out) {
      throw InputError("write failed for " + path.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

void save_sequence(const SequenceDataset & seq, const std::filesystem::path & path)
{
  validate(seq);
  const Index d = seq.dim();
  bool labels = false;
  bool params = false;
  for (const auto & f : seq.frames) {
    labels = labels || f.has_labels();
    params = params || f.frame_param.has_value();
  }
  std::string header = "frame,id";
  for (Index k = 0; k < d; ++k) {
    header += ",x" + std::to_string(k);
  }
  if (labels) {
    header += ",label";
  }
  if (params) {
    header += ",param";
  }

  std::vector<std::string> rows;
  for (std::size_t f = 0; f < seq.frames.size(); ++f) {
    const auto & cloud = seq.frames[f];
    for (Index i = 0; i < cloud.size(); ++i) {
      std::string r = std::to_string(f) + "," + std::to_string(i);
      for (Index k = 0; k < d; ++k) {
        r += "," + format_real(cloud.coords(i, k));
      }
      if (labels) {
        r += "," + std::to_string(cloud.has_labels() ? cloud.labels[static_cast<std::size_t>(i)] : 0);
      }
      if (params) {
        r += "," + format_real(cloud.frame_param.value_or(static_cast<double>(f)));
      }
      rows.push_back(std::move(r));
    }
  }
  write_csv(path, header, rows);
}

}  // namespace topotip
