#include "topotip/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace topotip
{

double potential(const PotentialSpec & spec, double x1, double x2)
{
  switch (spec.kind) {
    case PotentialKind::rvp: {
        const double r2 = x1 * x1 + x2 * x2;
        return 0.5 * r2 * r2 + spec.h * r2;
      }
    case PotentialKind::double_well: {
        const double a = x1 * x1 - spec.h;
        return a * a + x2 * x2;
      }
    case PotentialKind::harmonic:
      return 0.5 * (x1 * x1 + x2 * x2);
  }
  return 0.0;
}

namespace
{

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
  std::seed_seq seq{
    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

PointCloud sample_mh(const PotentialSpec & spec, Index n, const McmcOptions & options,
  std::uint64_t seed)
{
  if (n < 1) {
    throw ConfigError("sample count must be >= 1");
  }
  if (!(spec.temperature > 0.0)) {
    throw ConfigError("temperature must be > 0");
  }
  if (options.burn_in < 0 || options.thin < 0) {
    throw ConfigError("burn_in and thin must be >= 0");
  }
  const double step = options.step_scale.value_or(0.1 * std::sqrt(spec.temperature));
  if (!(step > 0.0)) {
    throw ConfigError("step_scale must be > 0");
  }
  const Index chains = options.chains > 0 ? std::min(options.chains, n) : n;
  const Index stride = std::max<Index>(options.thin, 1);
  const Index per_chain = (n + chains - 1) / chains;

  PointCloud cloud;
  cloud.coords.resize(n, 2);
  cloud.frame_param = spec.h;

  Index written = 0;
  for (Index c = 0; c < chains && written < n; ++c) {
    auto rng = stream(seed, static_cast<std::uint64_t>(c));
    std::normal_distribution<double> gauss(0.0, step);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double radius = options.init_radius * std::sqrt(unit(rng));
    const double angle = 2.0 * std::numbers::pi * unit(rng);
    double x1 = radius * std::cos(angle);
    double x2 = radius * std::sin(angle);
    double v = potential(spec, x1, x2);

    auto advance = [&]() {
        const double y1 = x1 + gauss(rng);
        const double y2 = x2 + gauss(rng);
        const double w = potential(spec, y1, y2);
        const double log_ratio = -(w - v) / spec.temperature;
        if (log_ratio >= 0.0 || unit(rng) < std::exp(log_ratio)) {
          x1 = y1;
          x2 = y2;
          v = w;
        }
      };

    for (Index s = 0; s < options.burn_in; ++s) {
      advance();
    }
    for (Index k = 0; k < per_chain && written < n; ++k) {
      if (k > 0) {
        for (Index s = 0; s < stride; ++s) {
          advance();
        }
      }
      cloud.coords(written, 0) = x1;
      cloud.coords(written, 1) = x2;
      ++written;
    }
  }
  return cloud;
}

PointCloud sample_mh(const PotentialSpec & spec, Index n, Index burn_in, Index thin,
  double step_scale, std::uint64_t seed)
{
  McmcOptions options;
  options.burn_in = burn_in;
  options.thin = thin;
  options.step_scale = step_scale;
  return sample_mh(spec, n, options, seed);
}

std::vector<double> linspace(double first, double last, Index count)
{
  std::vector<double> out;
  if (count <= 0) {
    return out;
  }
  if (count == 1) {
    return {first};
  }
  out.reserve(static_cast<std::size_t>(count));
  for (Index i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    out.push_back(i == count - 1 ? last : first + t * (last - first));
  }
  return out;
}

SequenceDataset make_sequence(PotentialKind kind, const std::vector<double> & h_grid,
  double temperature, Index n, std::uint64_t seed, const McmcOptions & options)
{
  if (h_grid.empty()) {
    throw ConfigError("h grid is empty");
  }
  SequenceDataset seq;
  for (std::size_t i = 0; i < h_grid.size(); ++i) {
    const PotentialSpec spec{kind, h_grid[i], temperature};
    // Distinct frames get unrelated streams: mix the frame index into the seed.
    const std::uint64_t frame_seed = seed * 0x9E3779B97F4A7C15ULL + i + 1;
    seq.frames.push_back(sample_mh(spec, n, options, frame_seed));
  }
  return seq;
}

void validate(const DorsognaParams & p)
{
  if (p.n_particles < 2) {
    throw ConfigError("dorsogna needs at least 2 particles");
  }
  if (!(p.attract_strength > 0 && p.attract_range > 0 && p.repel_strength > 0 &&
    p.repel_range > 0))
  {
    throw ConfigError("Morse strengths and ranges must be > 0");
  }
  if (!(p.dt > 0)) {
    throw ConfigError("dt must be > 0");
  }
  if (!(p.self_prop >= 0 && p.friction > 0)) {
    throw ConfigError("self_prop must be >= 0 and friction > 0");
  }
  if (p.snapshot_times.empty()) {
    throw ConfigError("no snapshot times");
  }
  for (std::size_t i = 0; i < p.snapshot_times.size(); ++i) {
    if (p.snapshot_times[i] < 0 || (i > 0 && p.snapshot_times[i] < p.snapshot_times[i - 1])) {
      throw ConfigError("snapshot times must be non-negative and non-decreasing");
    }
  }
}

namespace
{

// Pairwise Morse force on every particle (unit mass); pos is n x 2.
void interaction(const DorsognaParams & p, const Matrix & pos, Matrix & force)
{
  const Index n = pos.rows();
  force.setZero(n, 2);
  const double ca_la = p.attract_strength / p.attract_range;
  const double cr_lr = p.repel_strength / p.repel_range;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double dx = pos(i, 0) - pos(j, 0);
      const double dy = pos(i, 1) - pos(j, 1);
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r <= 0.0) {
        continue;
      }
      // -dU/dr; positive pushes i away from j.
      const double f = cr_lr * std::exp(-r / p.repel_range) -
        ca_la * std::exp(-r / p.attract_range);
      const double fx = f * dx / r;
      const double fy = f * dy / r;
      force(i, 0) += fx;
      force(i, 1) += fy;
      force(j, 0) -= fx;
      force(j, 1) -= fy;
    }
  }
}

Matrix drive(const DorsognaParams & p, const Matrix & vel)
{
  const Vector speed2 = vel.rowwise().squaredNorm();
  return ((p.self_prop - p.friction * speed2.array()).matrix().asDiagonal()) * vel;
}

}  // namespace

SequenceDataset simulate_dorsogna(const DorsognaParams & p, std::uint64_t seed)
{
  validate(p);
  const Index n = p.n_particles;
  auto rng = stream(seed, 0xD0250);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Matrix pos(n, 2);
  Matrix vel(n, 2);
  for (Index i = 0; i < n; ++i) {
    const double r = p.init_radius * std::sqrt(unit(rng));
    const double a = 2.0 * std::numbers::pi * unit(rng);
    pos(i, 0) = r * std::cos(a);
    pos(i, 1) = r * std::sin(a);
    const double s = p.init_speed * unit(rng);
    const double b = 2.0 * std::numbers::pi * unit(rng);
    vel(i, 0) = s * std::cos(b);
    vel(i, 1) = s * std::sin(b);
  }

  SequenceDataset seq;
  auto snapshot = [&](double t) {
      PointCloud cloud;
      cloud.coords.resize(n, 4);
      cloud.coords.leftCols(2) = pos;
      cloud.coords.rightCols(2) = vel;
      cloud.frame_param = t;
      seq.frames.push_back(std::move(cloud));
    };

  Matrix force;
  interaction(p, pos, force);
  double t = 0.0;
  long long step = 0;
  std::size_t next = 0;
  const double half = 0.5 * p.dt;
  while (next < p.snapshot_times.size()) {
    while (next < p.snapshot_times.size() && p.snapshot_times[next] <= t + 1e-9 * p.dt) {
      snapshot(p.snapshot_times[next]);
      ++next;
    }
    if (next >= p.snapshot_times.size()) {
      break;
    }
    // Velocity-Verlet with the velocity-dependent drive evaluated at the
    // half-step velocity.
    Matrix v_half = vel + half * (force + drive(p, vel));
    pos += p.dt * v_half;
    interaction(p, pos, force);
    vel = v_half + half * (force + drive(p, v_half));
    t += p.dt;
    ++step;
    if (!pos.allFinite() || !vel.allFinite()) {
      throw NumericalError("dorsogna integration became non-finite at step " +
              std::to_string(step));
    }
  }
  return seq;
}

}  // namespace topotip
