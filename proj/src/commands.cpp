#include "topotip/commands.hpp"

#include "topotip/entropy.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <ostream>
#include <set>

namespace topotip
{

namespace
{

const char * system_name(SystemKind s)
{
  switch (s) {
    case SystemKind::rvp: return "rvp";
    case SystemKind::dwell: return "dwell";
    case SystemKind::dorsogna: return "dorsogna";
  }
  return "?";
}

Index resolved_frames(const RunConfig & c)
{
  return c.frames.value_or(c.system == SystemKind::dorsogna ? 61 : 51);
}

double resolved_h_start(const RunConfig & c)
{
  return c.h_start.value_or(c.system == SystemKind::dwell ? 1.0 : -1.0);
}

double resolved_h_end(const RunConfig & c)
{
  return c.h_end.value_or(c.system == SystemKind::dwell ? -1.0 : 1.0);
}

double resolved_temperature(const RunConfig & c)
{
  return c.temperature.value_or(c.system == SystemKind::dwell ? 0.04 : 0.001);
}

std::filesystem::path with_suffix(const std::filesystem::path & p, const std::string & suffix)
{
  auto out = p;
  out.replace_filename(p.stem().string() + suffix + p.extension().string());
  return out;
}

void write_echo(const RunConfig & config, const std::string & command)
{
  const auto path = echo_path(config.output);
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp);
    if (!out) {
      throw InputError("cannot write " + tmp.string());
    }
    auto j = nlohmann::json::parse(config_echo(config));
    j["command"] = command;
    out << j.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

// One job per label (or a single unlabeled job). Frames missing a label
// are an input error.
std::vector<std::pair<std::optional<int>, SequenceDataset>> split_by_label(
  const SequenceDataset & seq, bool standardize_clouds)
{
  std::set<int> labels;
  bool any = false;
  for (const auto & f : seq.frames) {
    any = any || f.has_labels();
    labels.insert(f.labels.begin(), f.labels.end());
  }
  std::vector<std::pair<std::optional<int>, SequenceDataset>> jobs;
  if (!any) {
    jobs.emplace_back(std::nullopt, seq);
    return jobs;
  }
  for (int label : labels) {
    SequenceDataset part;
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      PointCloud cloud = select_label(seq.frames[i], label);
      if (cloud.size() == 0) {
        throw InputError("frame " + std::to_string(i) + " has no points with label " +
                std::to_string(label));
      }
      cloud.labels.clear();
      part.frames.push_back(standardize_clouds ? standardize(cloud) : cloud);
    }
    jobs.emplace_back(label, std::move(part));
  }
  return jobs;
}

std::filesystem::path job_output(const RunConfig & c, const std::optional<int> & label)
{
  return label ? with_suffix(c.output, "_label" + std::to_string(*label)) : c.output;
}

void summarize(const IndicatorTable & t, const std::filesystem::path & out, std::ostream & log)
{
  if (t.nonconverged() > 0) {
    log << "warning: " << t.nonconverged() << " of " << t.rows.size() <<
      " rows did not converge (" << out.string() << ")\n";
  }
}

SequenceDataset load_input(const RunConfig & c)
{
  if (c.input.empty()) {
    throw ConfigError("an input sequence is required");
  }
  if (!std::filesystem::exists(c.input)) {
    throw InputError("input file not found: " + c.input.string());
  }
  return load_sequence(c.input);
}

}  // namespace

void validate(const RunConfig & c)
{
  validate(c.tpot);
  validate(c.mtn);
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) {
    throw ConfigError("gamma must lie in [0, 1]");
  }
  if (c.L < 1) {
    throw ConfigError("L must be >= 1");
  }
  if (c.n_points < 1) {
    throw ConfigError("n-points must be >= 1");
  }
  if (resolved_frames(c) < 1) {
    throw ConfigError("frames must be >= 1");
  }
  if (!(resolved_temperature(c) > 0.0)) {
    throw ConfigError("temperature must be > 0");
  }
  if (c.mcmc.burn_in < 0 || c.mcmc.thin < 1 || c.mcmc.chains < 0) {
    throw ConfigError("burn-in must be >= 0, thin >= 1, chains >= 0");
  }
  if (c.mcmc.step_scale && !(*c.mcmc.step_scale > 0.0)) {
    throw ConfigError("step-scale must be > 0");
  }
  if (!(c.t_end >= c.t_start) || !(c.t_start >= 0.0)) {
    throw ConfigError("snapshot times must satisfy 0 <= t-start <= t-end");
  }
  DorsognaParams dp = c.dorsogna;
  dp.snapshot_times = linspace(c.t_start, c.t_end, resolved_frames(c));
  validate(dp);
  if (c.keyframes.empty() && c.n_keyframes < 2) {
    throw ConfigError("n-keyframes must be >= 2");
  }
  if (c.frame_a < 0 || (c.frame_b && *c.frame_b < 0)) {
    throw ConfigError("frame indices must be >= 0");
  }
}

std::filesystem::path echo_path(const std::filesystem::path & output)
{
  auto p = output;
  p.replace_extension(".config.json");
  return p;
}

std::string config_echo(const RunConfig & c)
{
  nlohmann::json j;
  j["system"] = system_name(c.system);
  j["n_points"] = c.n_points;
  j["frames"] = resolved_frames(c);
  j["h_start"] = resolved_h_start(c);
  j["h_end"] = resolved_h_end(c);
  j["temperature"] = resolved_temperature(c);
  j["seed"] = c.seed;
  j["mcmc"] = {
    {"burn_in", c.mcmc.burn_in},
    {"thin", c.mcmc.thin},
    {"step_scale", c.mcmc.step_scale.value_or(0.1 * std::sqrt(resolved_temperature(c)))},
    {"chains", c.mcmc.chains == 0 ? c.n_points : c.mcmc.chains},
    {"init_radius", c.mcmc.init_radius},
  };
  const auto & d = c.dorsogna;
  j["dorsogna"] = {
    {"n_particles", d.n_particles},
    {"self_prop", d.self_prop},
    {"friction", d.friction},
    {"attract_strength", d.attract_strength},
    {"attract_range", d.attract_range},
    {"repel_strength", d.repel_strength},
    {"repel_range", d.repel_range},
    {"dt", d.dt},
    {"t_start", c.t_start},
    {"t_end", c.t_end},
    {"init_radius", d.init_radius},
    {"init_speed", d.init_speed},
  };
  j["tpot"] = {
    {"alpha", c.tpot.alpha},
    {"beta", c.tpot.beta},
    {"eps_v", c.tpot.eps_v},
    {"eps_e", c.tpot.eps_e},
    {"outer_iters", c.tpot.outer_iters},
    {"sinkhorn_iters", c.tpot.sinkhorn_iters},
    {"tol", c.tpot.tol},
    {"marginal_tol", c.tpot.marginal_tol},
  };
  j["mtn"] = {{"hom_dim", c.mtn.hom_dim}, {"max_cycles", c.mtn.max_cycles}};
  j["gamma"] = c.gamma;
  j["L"] = c.L;
  j["keyframes"] = c.keyframes;
  j["n_keyframes"] = c.n_keyframes;
  j["matching"] = c.matching == MatchingMode::argmax ? "argmax" : "assignment";
  j["reference"] = c.reference == ReferenceMode::global ? "global" : "segment";
  j["standardize"] = c.standardize;
  j["frame_a"] = c.frame_a;
  j["frame_b"] = c.frame_b ? nlohmann::json(*c.frame_b) : nlohmann::json("last");
  j["input"] = c.input.string();
  j["output"] = c.output.string();
  return j.dump(2);
}

CurveOptions curve_options(const RunConfig & c)
{
  CurveOptions o;
  o.tpot = c.tpot;
  o.mtn = c.mtn;
  o.gamma = c.gamma;
  o.L = c.L;
  o.matching = c.matching;
  o.reference = c.reference;
  o.seed = c.seed;
  return o;
}

SequenceDataset run_synth(const RunConfig & c)
{
  validate(c);
  if (c.output.empty()) {
    throw ConfigError("an output path is required");
  }
  SequenceDataset seq;
  switch (c.system) {
    case SystemKind::rvp:
    case SystemKind::dwell:
      seq = make_sequence(c.system == SystemKind::rvp ? PotentialKind::rvp :
        PotentialKind::double_well,
        linspace(resolved_h_start(c), resolved_h_end(c), resolved_frames(c)),
        resolved_temperature(c), c.n_points, c.seed, c.mcmc);
      break;
    case SystemKind::dorsogna: {
        DorsognaParams p = c.dorsogna;
        p.snapshot_times = linspace(c.t_start, c.t_end, resolved_frames(c));
        seq = simulate_dorsogna(p, c.seed);
        break;
      }
  }
  save_sequence(seq, c.output);
  write_echo(c, "synth");
  return seq;
}

std::vector<std::filesystem::path> run_baseline(const RunConfig & c, std::ostream & log)
{
  validate(c);
  if (c.output.empty()) {
    throw ConfigError("an output path is required");
  }
  const auto seq = load_input(c);
  std::vector<std::filesystem::path> written;
  for (const auto & [label, part] : split_by_label(seq, c.standardize)) {
    const auto table = baseline_curves(part, curve_options(c));
    const auto out = job_output(c, label);
    save_indicator_csv(table, out);
    summarize(table, out, log);
    written.push_back(out);
  }
  write_echo(c, "baseline");
  return written;
}

std::vector<std::filesystem::path> run_interp(const RunConfig & c, std::ostream & log)
{
  validate(c);
  if (c.output.empty()) {
    throw ConfigError("an output path is required");
  }
  const auto seq = load_input(c);
  const auto keys = c.keyframes.empty() ? even_keyframes(seq.size(), c.n_keyframes) : c.keyframes;
  std::vector<std::filesystem::path> written;
  for (const auto & [label, part] : split_by_label(seq, c.standardize)) {
    const auto table = dynamic_curves(part, keys, curve_options(c));
    const auto out = job_output(c, label);
    save_indicator_csv(table, out);
    summarize(table, out, log);
    written.push_back(out);
  }
  write_echo(c, "interp");
  return written;
}

std::vector<std::filesystem::path> run_pointfield(const RunConfig & c, std::ostream & log)
{
  validate(c);
  if (c.output.empty()) {
    throw ConfigError("an output path is required");
  }
  const auto seq = load_input(c);
  const Index b = c.frame_b.value_or(seq.size() - 1);
  if (c.frame_a >= seq.size() || b >= seq.size()) {
    throw ConfigError("frame index out of range (sequence has " +
            std::to_string(seq.size()) + " frames)");
  }
  std::vector<std::filesystem::path> written;
  for (const auto & [label, part] : split_by_label(seq, c.standardize)) {
    const auto & A = part.frames[static_cast<std::size_t>(c.frame_a)];
    const auto & B = part.frames[static_cast<std::size_t>(b)];
    const Mtn P = build_mtn(A, c.mtn);
    const Mtn Q = build_mtn(B, c.mtn);
    const TpotResult res = solve_tpot(P, Q, c.tpot);
    const Matrix align = align_cycles(res.coupling.pi_e,
      c.matching == MatchingMode::assignment);
    const EntropyField field = point_level_field(P.incidence, Q.incidence, align);
    const auto out = job_output(c, label);
    save_field_csv(B, field, out);
    if (!res.converged) {
      log << "warning: the frame solve did not converge (" << out.string() << ")\n";
    }
    written.push_back(out);
  }
  write_echo(c, "pointfield");
  return written;
}

int exit_code(const Error & error)
{
  switch (error.category()) {
    case Error::Category::config: return 2;
    case Error::Category::input: return 3;
    case Error::Category::numerical: return 4;
  }
  return 1;
}

std::string error_line(const Error & error)
{
  static const std::map<Error::Category, const char *> names{
    {Error::Category::config, "config"},
    {Error::Category::input, "input"},
    {Error::Category::numerical, "numerical"},
  };
  nlohmann::json j{{"error", names.at(error.category())}, {"message", error.what()}};
  return j.dump();
}

}  // namespace topotip
