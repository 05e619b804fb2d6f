#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dsaddle/cli.hpp"

namespace {

void add_tolerance_flags(CLI::App* sub, dsaddle::cli::RunConfig& cfg) {
  sub->add_option("--tol-rank", cfg.tol.rank_rtol,
                  "relative singular-value threshold for rank decisions")
      ->capture_default_str();
  sub->add_option("--tol-residual", cfg.tol.residual_rtol,
                  "relative residual threshold for identity checks")
      ->capture_default_str();
}

void add_format_flag(CLI::App* sub, dsaddle::cli::RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, dsaddle::cli::OutputFormat>{
              {"text", dsaddle::cli::OutputFormat::Text},
              {"json", dsaddle::cli::OutputFormat::Json}},
          CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  using dsaddle::cli::Subcommand;
  dsaddle::cli::RunConfig cfg;

  CLI::App app{"Invertibility analysis and structured inverses of double "
               "saddle-point matrices"};
  app.require_subcommand(1);

  auto* diagnose = app.add_subcommand("diagnose", "decide invertibility of K");
  diagnose->add_option("-i,--input", cfg.input_dir,
                       "directory with A.mtx B.mtx C.mtx [D.mtx] [E.mtx]")
      ->required();
  diagnose->add_flag("--oracle", cfg.oracle,
                     "also report the dense singular-value check");
  add_tolerance_flags(diagnose, cfg);
  add_format_flag(diagnose, cfg);

  auto* invert = app.add_subcommand("invert", "build K^-1 block by block");
  invert->add_option("-i,--input", cfg.input_dir, "block directory")->required();
  invert->add_option("-o,--output", cfg.output_dir,
                     "directory for Z11.mtx ... Z33.mtx and manifest.json")
      ->required();
  invert->add_flag("--allow-dense", cfg.allow_dense,
                   "fall back to dense inversion when no closed form applies");
  add_tolerance_flags(invert, cfg);
  add_format_flag(invert, cfg);

  std::uint64_t seed = 0;
  auto* generate = app.add_subcommand("generate", "write a random instance");
  generate->add_option("--spec", cfg.spec_path, "generator spec (JSON)")
      ->required();
  auto* seed_opt = generate->add_option("--seed", seed, "overrides the spec seed");
  generate->add_option("-o,--output", cfg.output_dir, "output directory")
      ->required();
  add_tolerance_flags(generate, cfg);
  add_format_flag(generate, cfg);

  auto* verify = app.add_subcommand("verify", "recompute the structural identities");
  verify->add_option("-i,--input", cfg.input_dir, "block directory")->required();
  verify->add_option("--alpha", cfg.alpha, "congruence parameter");
  add_tolerance_flags(verify, cfg);
  add_format_flag(verify, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dsaddle::cli::kExitUsage;
  }

  if (*seed_opt) cfg.seed = seed;
  if (diagnose->parsed()) cfg.command = Subcommand::Diagnose;
  if (invert->parsed()) cfg.command = Subcommand::Invert;
  if (generate->parsed()) cfg.command = Subcommand::Generate;
  if (verify->parsed()) cfg.command = Subcommand::Verify;
  return dsaddle::cli::run(cfg, std::cout, std::cerr);
}
