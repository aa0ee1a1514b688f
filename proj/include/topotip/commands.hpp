#ifndef TOPOTIP_COMMANDS_HPP_
#define TOPOTIP_COMMANDS_HPP_

#include "topotip/geodesic.hpp"
#include "topotip/synth.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace topotip
{

enum class SystemKind { rvp, dwell, dorsogna };

/// Every tunable of a run. Unset optionals take the per-system defaults.
struct RunConfig
{
  // synth
  SystemKind system = SystemKind::rvp;
  Index n_points = 200;
  std::optional<Index> frames;          ///< rvp/dwell grid size (51), dorsogna snapshots (61)
  std::optional<double> h_start;        ///< rvp -1, dwell 1
  std::optional<double> h_end;          ///< rvp 1, dwell -1
  std::optional<double> temperature;    ///< rvp 0.001, dwell 0.04
  McmcOptions mcmc;
  DorsognaParams dorsogna;
  double t_start = 1.0;
  double t_end = 60.0;
  std::uint64_t seed = 0;

  // analysis
  TpotConfig tpot;
  MtnConfig mtn;
  double gamma = 0.5;
  Index L = 13;
  std::vector<Index> keyframes;  ///< empty: n_keyframes spread evenly
  Index n_keyframes = 4;
  MatchingMode matching = MatchingMode::argmax;
  ReferenceMode reference = ReferenceMode::global;
  bool standardize = false;      ///< per-label clouds only
  Index frame_a = 0;
  std::optional<Index> frame_b;  ///< default: last frame

  std::filesystem::path input;
  std::filesystem::path output;
};

/// Throws ConfigError on the first violated precondition.
void validate(const RunConfig & config);

/// Fully resolved configuration as pretty-printed JSON.
std::string config_echo(const RunConfig & config);

/// `<output without extension>.config.json`.
std::filesystem::path echo_path(const std::filesystem::path & output);

CurveOptions curve_options(const RunConfig & config);

/// Generates the configured system and writes the sequence CSV.
SequenceDataset run_synth(const RunConfig & config);

/// Baseline indicator table(s). A labeled input yields one CSV per label,
/// named `<stem>_label<k><ext>`. Non-convergence is summarized on `log`.
std::vector<std::filesystem::path> run_baseline(const RunConfig & config, std::ostream & log);

std::vector<std::filesystem::path> run_interp(const RunConfig & config, std::ostream & log);

/// Point-level entropy field of frame_b against frame_a, written with the
/// frame_b coordinates.
std::vector<std::filesystem::path> run_pointfield(const RunConfig & config, std::ostream & log);

/// 0 success, 2 config, 3 input, 4 numerical.
int exit_code(const Error & error);

/// One-line JSON error record for standard error.
std::string error_line(const Error & error);

/// Built-in property checks; one PASS/FAIL line each. Returns the number
/// of failures.
int run_selftest(std::ostream & out);

}  // namespace topotip

#endif  // TOPOTIP_COMMANDS_HPP_
