#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ideatrace/cascade.hpp"
#include "ideatrace/corpus.hpp"
#include "ideatrace/diffusion.hpp"
#include "ideatrace/genealogy.hpp"
#include "ideatrace/lda.hpp"
#include "ideatrace/yule.hpp"

namespace ideatrace {

// Whole-pipeline configuration. Loaded from a single JSON document; every
// leaf key can be overridden with its dotted name (see apply_override).
struct PipelineConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path manifest;  // empty: parse <country>_<year>.txt names
  std::filesystem::path out_dir = "out";

  CorpusConfig corpus;
  std::filesystem::path stopwords_file;  // empty: builtin English list

  LdaHyperParams lda;
  int beta_top_words = 50;  // <= 0 writes the full matrix

  std::vector<int> k_candidates;
  int cv_folds = 5;
  int cv_iters = 0;  // 0: use lda.iters
  int cv_particles = 20;

  CascadeConfig cascade;
  DiffusionConfig diffusion;
  std::vector<double> sweep_tau_grid = {0.0,  0.1,  0.2,  0.25, 0.3,
                                        0.35, 0.4,  0.5,  0.6,  0.7, 0.8};

  KlDirection kl_direction = KlDirection::child_given_parent;

  int gn_communities = 3;
  int growth_max_segments = 3;
  double yule_lambda = 0.1;
  double yule_t = 5.0;
  int yule_n0 = 1;
  int yule_trials = 100000;

  std::uint64_t seed = 1;
  int threads = 1;

  static PipelineConfig from_json_text(const std::string& text);
  static PipelineConfig from_json_file(const std::filesystem::path& path);

  // Sets one leaf by its dotted name ("corpus.doc_len", "seed", ...);
  // throws ConfigError on unknown keys or unparsable values.
  void apply_override(const std::string& dotted_key, const std::string& value);

  std::string to_json_text() const;
  void validate() const;
};

// Names every dotted config key, for CLI registration and diagnostics.
std::vector<std::string> config_keys();

enum class Stage { prepare, train, select_k, cascades, infer, sweep, tree, stats, all };

Stage parse_stage(const std::string& name);  // throws ConfigError
const char* stage_name(Stage stage);

// Runs one stage against cfg.out_dir. Inputs are the prior stage's files;
// a missing one raises MissingArtifact naming it. Besides its artifacts
// the stage writes run.json (config snapshot, seed, input/output hashes,
// timing). `all` chains prepare, train, cascades, infer, sweep, tree,
// stats; select_k is a standalone model-selection utility.
void run_stage(Stage stage, const PipelineConfig& cfg);

}  // namespace ideatrace
