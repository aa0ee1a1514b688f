#ifndef TOPOTIP_SYNTH_HPP_
#define TOPOTIP_SYNTH_HPP_

#include "topotip/point_data.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace topotip
{

/// `harmonic` is V = (x1^2 + x2^2)/2, kept for validating the sampler
/// against an exactly known stationary density.
enum class PotentialKind { rvp, double_well, harmonic };

struct PotentialSpec
{
  PotentialKind kind = PotentialKind::rvp;
  double h = 0.0;
  double temperature = 1.0;
};

/// rvp: 1/2 r^4 + h r^2; double_well: (x1^2 - h)^2 + x2^2.
double potential(const PotentialSpec & spec, double x1, double x2);

/// Random-walk Metropolis-Hastings.
///
/// The sample is drawn from `chains` independent chains (default: one
/// chain per sample) started uniformly in a disk of radius `init_radius`.
/// Each chain is burned in, then records every `thin`-th state. Barriers
/// such as the double-well saddle at T = 0.04 are never crossed by a
/// single chain, so independent starts are what populate both modes.
struct McmcOptions
{
  Index burn_in = 5000;
  Index thin = 10;
  std::optional<double> step_scale;  ///< default 0.1 * sqrt(T)
  Index chains = 0;                  ///< 0: one chain per sample
  double init_radius = 1.5;
};

PointCloud sample_mh(const PotentialSpec & spec, Index n, const McmcOptions & options,
  std::uint64_t seed);

/// Convenience overload matching the documented argument order.
PointCloud sample_mh(const PotentialSpec & spec, Index n, Index burn_in, Index thin,
  double step_scale, std::uint64_t seed);

/// One independent cloud per grid value with frame_param = h.
SequenceDataset make_sequence(PotentialKind kind, const std::vector<double> & h_grid,
  double temperature, Index n, std::uint64_t seed, const McmcOptions & options = {});

/// `count` evenly spaced values from `first` to `last` inclusive.
std::vector<double> linspace(double first, double last, Index count);

/// D'Orsogna self-propelled particles with a Morse interaction
///   U(r) = Cr exp(-r / lr) - Ca exp(-r / la),
///   dv/dt = (self_prop - friction |v|^2) v - grad U   (unit mass).
/// Defaults sit in the single-mill regime (Cr > Ca, lr < la).
struct DorsognaParams
{
  Index n_particles = 200;
  double self_prop = 1.6;
  double friction = 0.5;
  double attract_strength = 1.0;
  double attract_range = 2.0;
  double repel_strength = 2.0;
  double repel_range = 0.5;
  double dt = 1e-2;
  std::vector<double> snapshot_times = linspace(1.0, 60.0, 61);
  double init_radius = 4.0;  ///< initial positions uniform in this disk
  double init_speed = 0.5;   ///< initial speeds uniform in [0, init_speed]
};

void validate(const DorsognaParams & params);

/// Snapshots are 4-D clouds (x, y, vx, vy) with frame_param = time.
/// Throws NumericalError naming the step if the state becomes non-finite.
SequenceDataset simulate_dorsogna(const DorsognaParams & params, std::uint64_t seed);

}  // namespace topotip

#endif  // TOPOTIP_SYNTH_HPP_
