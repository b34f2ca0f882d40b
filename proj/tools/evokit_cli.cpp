#include <CLI11.hpp>

#include <iostream>

#include "evokit/evokit.hpp"

namespace {

void add_curve_options(CLI::App* cmd, evokit::CurveInput& in) {
  cmd->add_option("curve", in.descriptor, "curve descriptor, e.g. ellipse:a=2,b=1");
  cmd->add_option("--csv", in.csv, "read the curve from a t,x,y CSV file instead");
  cmd->add_option("--kappa-min", in.kappa_min, "curvature gate")->capture_default_str();
  cmd->add_option("--density", in.density, "nodes per unit arclength (overrides the curve default)");
}

void add_output_options(CLI::App* cmd, evokit::OutputOptions& out) {
  cmd->add_option("-o,--out-dir", out.dir, "output directory")->capture_default_str();
  cmd->add_option("--prefix", out.prefix, "file name prefix (default: curve name)");
}

bool missing_curve(const evokit::CurveInput& in) { return in.descriptor.empty() == in.csv.empty(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolutes and involutes of plane curves"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("evokit ") + evokit::kToolVersion);

  evokit::CurveInput curve;
  evokit::OutputOptions output;

  auto* evolute = app.add_subcommand("evolute", "write the curve and its evolute as CSV and SVG");
  add_curve_options(evolute, curve);
  add_output_options(evolute, output);

  evokit::InvoluteParams inv;
  auto* involute = app.add_subcommand("involute", "write an involute of the curve as CSV and SVG");
  add_curve_options(involute, curve);
  add_output_options(involute, output);
  involute->add_option("-c,--c", inv.c, "string-length constant, outside the arclength range")->required();
  involute->add_option("--orientation", inv.orientation, "+1 or -1")
      ->check(CLI::IsMember({-1, 1}))
      ->capture_default_str();
  involute->add_option("--involute-density", inv.sample_density, "involute nodes per unit arclength")
      ->capture_default_str();

  evokit::AnalyzeOptions analyze_opts;
  std::string report_path;
  std::optional<std::uint64_t> seed;
  auto* analyze = app.add_subcommand("analyze", "emit a JSON report of critical points, exponents and checks");
  add_curve_options(analyze, curve);
  auto& ap = analyze_opts.params;
  analyze->add_option("--output", report_path, "report path (default: stdout)");
  analyze->add_option("--seed", seed, "random seed (default: EVOLUTE_KIT_SEED or built-in)");
  analyze->add_option("--scales", ap.scales, "scales per exponent fit")->capture_default_str();
  analyze->add_option("--window-lo", ap.window_lo, "smallest scale relative to arclength range")->capture_default_str();
  analyze->add_option("--window-hi", ap.window_hi, "largest scale relative to arclength range")->capture_default_str();
  analyze->add_option("--rounding", ap.rounding_threshold, "integer rounding threshold")->capture_default_str();
  analyze->add_option("--min-r2", ap.min_fit_r2, "smallest acceptable fit r2")->capture_default_str();
  analyze->add_option("--zero-threshold", ap.critical_zero_threshold, "|R'| treated as zero")->capture_default_str();
  analyze->add_option("--pairs", ap.nesting_pairs, "osculating disk pairs per segment")->capture_default_str();
  analyze->add_option("--slack", ap.nesting_slack, "disk nesting slack")->capture_default_str();
  analyze->add_option("--increvol-pairs", ap.increvol_pairs, "pairs for the integral identity")->capture_default_str();
  analyze->add_option("--increvol-tol", ap.increvol_rel_tol, "relative tolerance of the identity")
      ->capture_default_str();
  analyze->add_option("--separation", ap.separation, "double point arclength separation (0: 10 node spacings)")
      ->capture_default_str();

  std::string figure_path = "figure1.svg";
  auto* figure1 = app.add_subcommand("figure1", "draw the limacon and its involute");
  figure1->add_option("output", figure_path, "SVG path")->capture_default_str();

  std::size_t check_pairs = 200;
  auto* checks = app.add_subcommand("checks", "simplicity and osculating-circle nesting under monotone curvature");
  add_curve_options(checks, curve);
  checks->add_option("--pairs", check_pairs, "osculating disk pairs")->capture_default_str();
  checks->add_option("--seed", seed, "random seed (default: EVOLUTE_KIT_SEED or built-in)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : evokit::kExitParse;
  }

  auto resolve_seed = [&] { return seed ? *seed : evokit::seed_from_env(); };
  if (*figure1) return evokit::cmd_figure1(figure_path, std::cout, std::cerr);
  if (missing_curve(curve)) {
    std::cerr << "error: give either a curve descriptor or --csv\n";
    return evokit::kExitParse;
  }
  if (*evolute) return evokit::cmd_evolute(curve, output, std::cout, std::cerr);
  if (*involute) return evokit::cmd_involute(curve, inv, output, std::cout, std::cerr);
  int code = evokit::kExitOk;
  const int seed_status = evokit::guarded(std::cerr, [&] {
    ap.seed = resolve_seed();
    return static_cast<int>(evokit::kExitOk);
  });
  if (seed_status != evokit::kExitOk) return seed_status;
  if (*analyze) {
    analyze_opts.curve = curve;
    code = evokit::cmd_analyze(analyze_opts, report_path, std::cout, std::cerr);
  } else if (*checks) {
    code = evokit::cmd_checks(curve, check_pairs, ap.seed, std::cout, std::cerr);
  }
  return code;
}
