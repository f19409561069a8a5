// Command-line front end: loads a JSON config, applies flag overrides, and
// runs one pipeline stage (or the whole chain).

#include <cstdio>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "ideatrace/errors.hpp"
#include "ideatrace/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitMissingArtifact = 3;
constexpr int kExitDegenerate = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ideatrace: topic diffusion networks over timestamped text corpora"};
  app.get_formatter()->column_width(34);

  std::string config_path;
  std::string stage = "all";
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option(
      "--stage", stage,
      "prepare|train|select-k|cascades|infer|sweep|tree|stats|all");

  // Overrides apply in command-line order, last one wins.
  std::vector<std::pair<std::string, std::string>> overrides;
  auto collect = [&overrides](std::string key) {
    return [&overrides, key = std::move(key)](const std::string& value) {
      overrides.emplace_back(key, value);
    };
  };
  for (const auto& key : ideatrace::config_keys()) {
    app.add_option_function<std::string>("--" + key, collect(key),
                                         "set config key " + key);
  }
  // Short aliases for the common knobs. --seed and --threads are already
  // top-level keys and need no alias.
  const std::pair<const char*, const char*> aliases[] = {
      {"--k", "lda.k"},
      {"--alpha", "lda.alpha"},
      {"--eta", "lda.eta"},
      {"--iters", "lda.iters"},
      {"--doc-len", "corpus.doc_len"},
      {"--tau", "cascade.tau"},
      {"--alpha-hat", "diffusion.alpha_hat"},
      {"--stop-frac", "diffusion.stop_frac"},
      {"--k-max", "diffusion.k_max"},
      {"--out", "paths.out_dir"},
  };
  for (const auto& [flag, key] : aliases) {
    app.add_option_function<std::string>(flag, collect(key),
                                         "alias for --" + std::string(key));
  }

  CLI11_PARSE(app, argc, argv);

  try {
    ideatrace::PipelineConfig cfg;
    if (!config_path.empty()) {
      cfg = ideatrace::PipelineConfig::from_json_file(config_path);
    }
    for (const auto& [key, value] : overrides) {
      cfg.apply_override(key, value);
    }
    ideatrace::Stage parsed_stage = ideatrace::parse_stage(stage);
    ideatrace::run_stage(parsed_stage, cfg);
    std::fprintf(stderr, "stage '%s' finished; artifacts in %s\n",
                 ideatrace::stage_name(parsed_stage),
                 cfg.out_dir.string().c_str());
    return kExitOk;
  } catch (const ideatrace::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ideatrace::InvalidHyper& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ideatrace::MissingArtifact& e) {
    std::fprintf(stderr, "missing artifact: %s\n", e.what());
    return kExitMissingArtifact;
  } catch (const ideatrace::DegenerateSample& e) {
    std::fprintf(stderr, "degenerate data: %s\n", e.what());
    return kExitDegenerate;
  } catch (const ideatrace::EmptyVocabulary& e) {
    std::fprintf(stderr, "degenerate data: %s\n", e.what());
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFailure;
  }
}
