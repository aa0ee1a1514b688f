// topotip: synthetic data generation, indicator curves and point-level
// entropy fields for point-cloud sequences.

#include "topotip/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

using namespace topotip;

namespace
{

void add_analysis_flags(CLI::App * cmd, RunConfig & c)
{
  cmd->add_option("--input", c.input, "Sequence CSV")->required();
  cmd->add_option("--output", c.output, "Output CSV")->required();
  cmd->add_option("--alpha", c.tpot.alpha, "Geometric vs topological trade-off");
  cmd->add_option("--beta", c.tpot.beta, "Hypergraph term weight");
  cmd->add_option("--eps-v", c.tpot.eps_v, "Point coupling regularization");
  cmd->add_option("--eps-e", c.tpot.eps_e, "Cycle coupling regularization");
  cmd->add_option("--outer-iters", c.tpot.outer_iters);
  cmd->add_option("--sinkhorn-iters", c.tpot.sinkhorn_iters);
  cmd->add_option("--tol", c.tpot.tol, "Outer objective tolerance");
  cmd->add_option("--marginal-tol", c.tpot.marginal_tol, "Sinkhorn marginal tolerance");
  cmd->add_option("--gamma", c.gamma, "HE_sym vertex weight");
  cmd->add_option("--max-cycles", c.mtn.max_cycles, "Cycles kept per network");
  cmd->add_option("--hom-dim", c.mtn.hom_dim);
  cmd->add_option("--seed", c.seed);
  cmd->add_flag("--standardize", c.standardize, "Standardize per-label clouds");
  const std::map<std::string, MatchingMode> modes{
    {"argmax", MatchingMode::argmax}, {"assignment", MatchingMode::assignment}};
  cmd->add_option("--matching", c.matching)
  ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Topological tipping indicators for point-cloud sequences"};
  app.require_subcommand(1);
  RunConfig c;

  auto * synth = app.add_subcommand("synth", "Generate a synthetic sequence");
  const std::map<std::string, SystemKind> systems{
    {"rvp", SystemKind::rvp}, {"dwell", SystemKind::dwell},
    {"dorsogna", SystemKind::dorsogna}};
  synth->add_option("system", c.system, "rvp | dwell | dorsogna")->required()
  ->transform(CLI::CheckedTransformer(systems, CLI::ignore_case));
  synth->add_option("--output", c.output)->required();
  synth->add_option("--n-points", c.n_points, "Samples per frame (MCMC systems)");
  synth->add_option("--frames", c.frames, "Grid size");
  synth->add_option("--snapshots", c.frames, "Snapshot count (dorsogna)");
  synth->add_option("--h-start", c.h_start);
  synth->add_option("--h-end", c.h_end);
  synth->add_option("--temperature", c.temperature);
  synth->add_option("--burn-in", c.mcmc.burn_in);
  synth->add_option("--thin", c.mcmc.thin);
  synth->add_option("--step-scale", c.mcmc.step_scale);
  synth->add_option("--chains", c.mcmc.chains, "0: one chain per sample");
  synth->add_option("--n-particles", c.dorsogna.n_particles);
  synth->add_option("--self-prop", c.dorsogna.self_prop);
  synth->add_option("--friction", c.dorsogna.friction);
  synth->add_option("--attract-strength", c.dorsogna.attract_strength);
  synth->add_option("--attract-range", c.dorsogna.attract_range);
  synth->add_option("--repel-strength", c.dorsogna.repel_strength);
  synth->add_option("--repel-range", c.dorsogna.repel_range);
  synth->add_option("--dt", c.dorsogna.dt);
  synth->add_option("--t-start", c.t_start);
  synth->add_option("--t-end", c.t_end);
  synth->add_option("--seed", c.seed);

  auto * baseline = app.add_subcommand("baseline", "Every frame against the first");
  add_analysis_flags(baseline, c);

  auto * interp = app.add_subcommand("interp", "Indicator curves along keyframe geodesics");
  add_analysis_flags(interp, c);
  interp->add_option("--L", c.L, "Grid steps per keyframe segment");
  interp->add_option("--keyframes", c.keyframes, "Keyframe indices")->delimiter(',');
  interp->add_option("--n-keyframes", c.n_keyframes, "Evenly spread keyframes");
  const std::map<std::string, ReferenceMode> refs{
    {"global", ReferenceMode::global}, {"segment", ReferenceMode::segment}};
  interp->add_option("--reference", c.reference)
  ->transform(CLI::CheckedTransformer(refs, CLI::ignore_case));

  auto * pointfield = app.add_subcommand("pointfield", "Point-level entropy field");
  add_analysis_flags(pointfield, c);
  pointfield->add_option("--frame-a", c.frame_a, "Reference frame");
  pointfield->add_option("--frame-b", c.frame_b, "Target frame (default last)");

  auto * selftest = app.add_subcommand("selftest", "Run the built-in property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      const auto seq = run_synth(c);
      std::cerr << "wrote " << seq.size() << " frames to " << c.output.string() << '\n';
    } else if (*baseline) {
      for (const auto & p : run_baseline(c, std::cerr)) {
        std::cerr << "wrote " << p.string() << '\n';
      }
    } else if (*interp) {
      for (const auto & p : run_interp(c, std::cerr)) {
        std::cerr << "wrote " << p.string() << '\n';
      }
    } else if (*pointfield) {
      for (const auto & p : run_pointfield(c, std::cerr)) {
        std::cerr << "wrote " << p.string() << '\n';
      }
    } else if (*selftest) {
      return run_selftest(std::cout) == 0 ? 0 : 4;
    }
  } catch (const Error & e) {
    std::cerr << error_line(e) << '\n';
    return exit_code(e);
  } catch (const std::exception & e) {
    std::cerr << R"({"error":"internal","message":")" << e.what() << "\"}\n";
    return 1;
  }
  return 0;
}
