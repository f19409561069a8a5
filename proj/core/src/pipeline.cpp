#include "ideatrace/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ideatrace/community.hpp"
#include "ideatrace/errors.hpp"
#include "ideatrace/fit.hpp"
#include "ideatrace/genealogy.hpp"
#include "ideatrace/growth.hpp"
#include "ideatrace/netstats.hpp"
#include "ideatrace/rng.hpp"
#include "ideatrace/sha256.hpp"
#include "ideatrace/textio.hpp"

namespace ideatrace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Configuration

namespace {

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& key) {
  if (!j.is_number_integer()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return j.get<std::string>();
}

CascadeConfig::Mode parse_cascade_mode(const std::string& s) {
  if (s == "rank") return CascadeConfig::Mode::rank;
  if (s == "absolute") return CascadeConfig::Mode::absolute;
  throw ConfigError("cascade.mode must be 'rank' or 'absolute'");
}

KlDirection parse_kl_direction(const std::string& s) {
  if (s == "child_given_parent") return KlDirection::child_given_parent;
  if (s == "parent_given_child") return KlDirection::parent_given_child;
  throw ConfigError(
      "genealogy.kl_direction must be 'child_given_parent' or 'parent_given_child'");
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
  json root = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!root.is_object()) throw ConfigError("config must be a JSON object");

  PipelineConfig cfg;
  for (auto& [section, body] : root.items()) {
    if (section == "seed") {
      if (!body.is_number_unsigned() && !body.is_number_integer()) {
        throw ConfigError("config key 'seed' must be an integer");
      }
      cfg.seed = body.get<std::uint64_t>();
    } else if (section == "threads") {
      cfg.threads = get_int(body, "threads");
    } else if (section == "paths") {
      for (auto& [key, value] : body.items()) {
        if (key == "corpus_dir") cfg.corpus_dir = get_string(value, key);
        else if (key == "manifest") cfg.manifest = get_string(value, key);
        else if (key == "out_dir") cfg.out_dir = get_string(value, key);
        else throw ConfigError("unknown config key 'paths." + key + "'");
      }
    } else if (section == "corpus") {
      for (auto& [key, value] : body.items()) {
        if (key == "doc_len") cfg.corpus.doc_len = get_int(value, key);
        else if (key == "min_count") cfg.corpus.min_count = get_int(value, key);
        else if (key == "max_doc_frac") cfg.corpus.max_doc_frac = get_number(value, key);
        else if (key == "stopwords_file") cfg.stopwords_file = get_string(value, key);
        else throw ConfigError("unknown config key 'corpus." + key + "'");
      }
    } else if (section == "lda") {
      for (auto& [key, value] : body.items()) {
        if (key == "k") cfg.lda.num_topics = get_int(value, key);
        else if (key == "alpha") {
          double a = get_number(value, key);
          if (a < 0) throw ConfigError("lda.alpha must be >= 0 (0 means 50/K)");
          cfg.lda.alpha = a == 0.0 ? std::nullopt : std::optional<double>(a);
        } else if (key == "eta") cfg.lda.eta = get_number(value, key);
        else if (key == "iters") cfg.lda.iters = get_int(value, key);
        else if (key == "burn_in") cfg.lda.burn_in = get_int(value, key);
        else if (key == "sample_every") cfg.lda.sample_every = get_int(value, key);
        else if (key == "top_words") cfg.beta_top_words = get_int(value, key);
        else throw ConfigError("unknown config key 'lda." + key + "'");
      }
    } else if (section == "select_k") {
      for (auto& [key, value] : body.items()) {
        if (key == "candidates") {
          if (!value.is_array()) throw ConfigError("select_k.candidates must be an array");
          cfg.k_candidates.clear();
          for (auto& v : value) cfg.k_candidates.push_back(get_int(v, key));
        } else if (key == "folds") cfg.cv_folds = get_int(value, key);
        else if (key == "iters") cfg.cv_iters = get_int(value, key);
        else if (key == "particles") cfg.cv_particles = get_int(value, key);
        else throw ConfigError("unknown config key 'select_k." + key + "'");
      }
    } else if (section == "cascade") {
      for (auto& [key, value] : body.items()) {
        if (key == "tau") cfg.cascade.tau = get_number(value, key);
        else if (key == "mode") cfg.cascade.mode = parse_cascade_mode(get_string(value, key));
        else throw ConfigError("unknown config key 'cascade." + key + "'");
      }
    } else if (section == "diffusion") {
      for (auto& [key, value] : body.items()) {
        if (key == "alpha_hat") cfg.diffusion.alpha_hat = get_number(value, key);
        else if (key == "epsilon") cfg.diffusion.epsilon = get_number(value, key);
        else if (key == "k_max") cfg.diffusion.k_max = static_cast<std::int64_t>(get_number(value, key));
        else if (key == "stop_frac") cfg.diffusion.stop_frac = get_number(value, key);
        else throw ConfigError("unknown config key 'diffusion." + key + "'");
      }
    } else if (section == "sweep") {
      for (auto& [key, value] : body.items()) {
        if (key == "tau_grid") {
          if (!value.is_array()) throw ConfigError("sweep.tau_grid must be an array");
          cfg.sweep_tau_grid.clear();
          for (auto& v : value) cfg.sweep_tau_grid.push_back(get_number(v, key));
        } else throw ConfigError("unknown config key 'sweep." + key + "'");
      }
    } else if (section == "genealogy") {
      for (auto& [key, value] : body.items()) {
        if (key == "kl_direction") cfg.kl_direction = parse_kl_direction(get_string(value, key));
        else throw ConfigError("unknown config key 'genealogy." + key + "'");
      }
    } else if (section == "stats") {
      for (auto& [key, value] : body.items()) {
        if (key == "gn_communities") cfg.gn_communities = get_int(value, key);
        else if (key == "growth_max_segments") cfg.growth_max_segments = get_int(value, key);
        else if (key == "yule_lambda") cfg.yule_lambda = get_number(value, key);
        else if (key == "yule_t") cfg.yule_t = get_number(value, key);
        else if (key == "yule_n0") cfg.yule_n0 = get_int(value, key);
        else if (key == "yule_trials") cfg.yule_trials = get_int(value, key);
        else throw ConfigError("unknown config key 'stats." + key + "'");
      }
    } else {
      throw ConfigError("unknown config section '" + section + "'");
    }
  }
  return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path.string());
  return from_json_text(read_text_file(path));
}

void PipelineConfig::apply_override(const std::string& key, const std::string& value) {
  json full = json::parse(to_json_text());
  // Values that parse as JSON scalars/arrays are typed; anything else is
  // taken as a verbatim string.
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  json encoded = (parsed.is_discarded() || parsed.is_object()) ? json(value) : parsed;

  auto dot = key.find('.');
  if (dot == std::string::npos) {
    if (!full.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    full[key] = encoded;
  } else {
    std::string section = key.substr(0, dot);
    std::string leaf = key.substr(dot + 1);
    if (!full.contains(section) || !full[section].contains(leaf)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    full[section][leaf] = encoded;
  }
  *this = from_json_text(full.dump());
}

std::string PipelineConfig::to_json_text() const {
  json j;
  j["paths"] = {{"corpus_dir", corpus_dir.string()},
                {"manifest", manifest.string()},
                {"out_dir", out_dir.string()}};
  j["corpus"] = {{"doc_len", corpus.doc_len},
                 {"min_count", corpus.min_count},
                 {"max_doc_frac", corpus.max_doc_frac},
                 {"stopwords_file", stopwords_file.string()}};
  j["lda"] = {{"k", lda.num_topics},
              {"alpha", lda.alpha ? *lda.alpha : 0.0},
              {"eta", lda.eta},
              {"iters", lda.iters},
              {"burn_in", lda.burn_in},
              {"sample_every", lda.sample_every},
              {"top_words", beta_top_words}};
  j["select_k"] = {{"candidates", k_candidates},
                   {"folds", cv_folds},
                   {"iters", cv_iters},
                   {"particles", cv_particles}};
  j["cascade"] = {{"tau", cascade.tau},
                  {"mode", cascade.mode == CascadeConfig::Mode::rank ? "rank" : "absolute"}};
  j["diffusion"] = {{"alpha_hat", diffusion.alpha_hat},
                    {"epsilon", diffusion.epsilon},
                    {"k_max", diffusion.k_max},
                    {"stop_frac", diffusion.stop_frac}};
  j["sweep"] = {{"tau_grid", sweep_tau_grid}};
  j["genealogy"] = {{"kl_direction", kl_direction == KlDirection::child_given_parent
                                         ? "child_given_parent"
                                         : "parent_given_child"}};
  j["stats"] = {{"gn_communities", gn_communities},
                {"growth_max_segments", growth_max_segments},
                {"yule_lambda", yule_lambda},
                {"yule_t", yule_t},
                {"yule_n0", yule_n0},
                {"yule_trials", yule_trials}};
  j["seed"] = seed;
  j["threads"] = threads;
  return j.dump(2);
}

std::vector<std::string> config_keys() {
  return {
      "paths.corpus_dir", "paths.manifest",     "paths.out_dir",
      "corpus.doc_len",   "corpus.min_count",   "corpus.max_doc_frac",
      "corpus.stopwords_file",
      "lda.k",            "lda.alpha",          "lda.eta",
      "lda.iters",        "lda.burn_in",        "lda.sample_every",
      "lda.top_words",
      "select_k.candidates", "select_k.folds",  "select_k.iters",
      "select_k.particles",
      "cascade.tau",      "cascade.mode",
      "diffusion.alpha_hat", "diffusion.epsilon", "diffusion.k_max",
      "diffusion.stop_frac",
      "sweep.tau_grid",
      "genealogy.kl_direction",
      "stats.gn_communities", "stats.growth_max_segments",
      "stats.yule_lambda", "stats.yule_t", "stats.yule_n0", "stats.yule_trials",
      "seed",             "threads",
  };
}

void PipelineConfig::validate() const {
  corpus.validate();
  lda.validate();
  cascade.validate();
  diffusion.validate();
  if (threads < 1) throw ConfigError("threads must be >= 1");
  if (cv_folds < 2) throw ConfigError("select_k.folds must be >= 2");
  if (gn_communities < 1) throw ConfigError("stats.gn_communities must be >= 1");
  if (growth_max_segments < 1) throw ConfigError("stats.growth_max_segments must be >= 1");
  if (yule_trials < 1) throw ConfigError("stats.yule_trials must be >= 1");
  YuleParams{yule_lambda, yule_n0, yule_t}.validate();
}

Stage parse_stage(const std::string& name) {
  if (name == "prepare") return Stage::prepare;
  if (name == "train") return Stage::train;
  if (name == "select-k" || name == "select_k") return Stage::select_k;
  if (name == "cascades") return Stage::cascades;
  if (name == "infer") return Stage::infer;
  if (name == "sweep") return Stage::sweep;
  if (name == "tree") return Stage::tree;
  if (name == "stats") return Stage::stats;
  if (name == "all") return Stage::all;
  throw ConfigError("unknown stage '" + name + "'");
}

const char* stage_name(Stage stage) {
  switch (stage) {
    case Stage::prepare: return "prepare";
    case Stage::train: return "train";
    case Stage::select_k: return "select-k";
    case Stage::cascades: return "cascades";
    case Stage::infer: return "infer";
    case Stage::sweep: return "sweep";
    case Stage::tree: return "tree";
    case Stage::stats: return "stats";
    case Stage::all: return "all";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Artifact IO

namespace {

struct StageRecorder {
  const PipelineConfig& cfg;
  json inputs = json::object();
  json outputs = json::object();

  explicit StageRecorder(const PipelineConfig& c) : cfg(c) {}

  fs::path in(const std::string& name) {
    fs::path path = cfg.out_dir / name;
    if (!fs::exists(path)) {
      throw MissingArtifact("missing artifact '" + path.string() +
                            "' (run the producing stage first)");
    }
    inputs[name] = sha256_file_hex(path);
    return path;
  }

  void in_external(const fs::path& path) {
    if (!fs::exists(path)) {
      throw MissingArtifact("missing input '" + path.string() + "'");
    }
    inputs[path.string()] = sha256_file_hex(path);
  }

  void out(const std::string& name, const std::string& content) {
    fs::path path = cfg.out_dir / name;
    write_text_file(path, content);
    outputs[name] = sha256_hex(content);
  }
};

struct ConstitutionInfo {
  std::string id;
  std::string country;
  int year = 0;
  int n_documents = 0;
};

std::vector<ConstitutionInfo> read_constitutions_csv(const fs::path& path) {
  auto rows = read_csv(path);
  std::vector<ConstitutionInfo> out;
  for (std::size_t r = 1; r < rows.size(); ++r) {  // skip header
    if (rows[r].size() != 4) {
      throw ConfigError("bad row in " + path.string());
    }
    out.push_back({rows[r][0], rows[r][1], parse_int(rows[r][2], "year"),
                   parse_int(rows[r][3], "n_documents")});
  }
  return out;
}

struct DocumentsFile {
  std::vector<Document> documents;
  std::vector<std::string> ids;  // "<constitution>#<position>"
};

DocumentsFile read_documents_jsonl(const fs::path& path) {
  DocumentsFile out;
  for (const auto& line : split_lines(read_text_file(path))) {
    if (line.empty()) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ConfigError("bad JSON line in " + path.string());
    Document doc;
    doc.constitution_id = j.at("constitution_id").get<std::string>();
    doc.position = j.at("position").get<int>();
    for (const auto& pair : j.at("counts")) {
      doc.counts.emplace_back(pair.at(0).get<std::int32_t>(),
                              pair.at(1).get<std::int32_t>());
    }
    out.ids.push_back(j.at("id").get<std::string>());
    out.documents.push_back(std::move(doc));
  }
  return out;
}

std::string documents_jsonl_text(const std::vector<Document>& documents) {
  std::string out;
  for (const auto& doc : documents) {
    json counts = json::array();
    for (auto [t, c] : doc.counts) counts.push_back({t, c});
    json j;
    j["id"] = doc.constitution_id + "#" + std::to_string(doc.position);
    j["constitution_id"] = doc.constitution_id;
    j["position"] = doc.position;
    j["counts"] = std::move(counts);
    out += j.dump();
    out += '\n';
  }
  return out;
}

// theta.csv rows into a row-major matrix following the documents order.
std::pair<std::vector<double>, int> read_theta_csv(
    const fs::path& path, const std::vector<std::string>& doc_ids) {
  auto rows = read_csv(path);
  int num_topics = 0;
  std::map<std::string, std::vector<std::pair<int, double>>> by_doc;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 3) throw ConfigError("bad row in " + path.string());
    int topic = parse_int(rows[r][1], "topic");
    num_topics = std::max(num_topics, topic + 1);
    by_doc[rows[r][0]].emplace_back(topic, parse_double(rows[r][2], "proportion"));
  }
  std::vector<double> theta(doc_ids.size() * static_cast<std::size_t>(num_topics), 0.0);
  for (std::size_t d = 0; d < doc_ids.size(); ++d) {
    auto it = by_doc.find(doc_ids[d]);
    if (it == by_doc.end()) {
      throw ConfigError("document '" + doc_ids[d] + "' missing from " + path.string());
    }
    for (auto [k, v] : it->second) {
      theta[d * static_cast<std::size_t>(num_topics) + static_cast<std::size_t>(k)] = v;
    }
  }
  return {std::move(theta), num_topics};
}

std::vector<ConstitutionMixture> read_mixtures_csv(const fs::path& path) {
  auto rows = read_csv(path);
  std::map<std::string, ConstitutionMixture> by_id;
  int num_topics = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 4) throw ConfigError("bad row in " + path.string());
    num_topics = std::max(num_topics, parse_int(rows[r][2], "topic") + 1);
  }
  for (std::size_t r = 1; r < rows.size(); ++r) {
    auto& m = by_id[rows[r][0]];
    if (m.weights.empty()) {
      m.constitution_id = rows[r][0];
      m.year = parse_int(rows[r][1], "year");
      m.weights.assign(static_cast<std::size_t>(num_topics), 0.0);
    }
    m.weights[static_cast<std::size_t>(parse_int(rows[r][2], "topic"))] =
        parse_double(rows[r][3], "weight");
  }
  std::vector<ConstitutionMixture> out;
  out.reserve(by_id.size());
  for (auto& [id, m] : by_id) out.push_back(std::move(m));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.year, a.constitution_id) < std::tie(b.year, b.constitution_id);
  });
  return out;
}

std::vector<Cascade> read_cascades_json(const fs::path& path) {
  json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw ConfigError("bad JSON in " + path.string());
  std::vector<Cascade> cascades;
  for (const auto& entry : j.at("cascades")) {
    Cascade c;
    c.topic_id = entry.at("topic_id").get<int>();
    for (const auto& hit : entry.at("hits")) {
      c.hits.emplace_back(hit.at(0).get<std::string>(), hit.at(1).get<int>());
    }
    cascades.push_back(std::move(c));
  }
  return cascades;
}

std::string cascades_json_text(const std::vector<Cascade>& cascades) {
  json out;
  out["cascades"] = json::array();
  for (const auto& c : cascades) {
    json hits = json::array();
    for (const auto& [id, year] : c.hits) hits.push_back({id, year});
    out["cascades"].push_back({{"topic_id", c.topic_id}, {"hits", std::move(hits)}});
  }
  return out.dump(2) + "\n";
}

DiffusionNetwork read_network_csv(const fs::path& path,
                                  const std::vector<ConstitutionInfo>& constitutions) {
  DiffusionNetwork g;
  for (const auto& c : constitutions) g.nodes.push_back({c.id, c.year});
  std::sort(g.nodes.begin(), g.nodes.end(), [](const auto& a, const auto& b) {
    return std::tie(a.year, a.id) < std::tie(b.year, b.id);
  });
  std::map<std::string, std::int32_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    index[g.nodes[i].id] = static_cast<std::int32_t>(i);
  }
  auto rows = read_csv(path);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != 5) throw ConfigError("bad row in " + path.string());
    auto src = index.find(rows[r][0]);
    auto dst = index.find(rows[r][1]);
    if (src == index.end() || dst == index.end()) {
      throw ConfigError("network edge references unknown constitution in " +
                        path.string());
    }
    g.edges.push_back({src->second, dst->second,
                       parse_double(rows[r][4], "gain_at_insertion")});
  }
  return g;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string network_dot_text(const DiffusionNetwork& g,
                             const std::map<std::string, std::string>& country_of) {
  std::string out = "digraph diffusion {\n  rankdir=LR;\n  node [shape=box];\n";
  for (const auto& node : g.nodes) {
    auto it = country_of.find(node.id);
    std::string label = (it != country_of.end() ? it->second : node.id) + "\\n" +
                        std::to_string(node.year);
    out += "  \"" + dot_escape(node.id) + "\" [label=\"" + dot_escape(label) +
           "\"];\n";
  }
  for (const auto& e : g.edges) {
    out += "  \"" + dot_escape(g.nodes[static_cast<std::size_t>(e.src)].id) +
           "\" -> \"" + dot_escape(g.nodes[static_cast<std::size_t>(e.dst)].id) +
           "\";\n";
  }
  out += "}\n";
  return out;
}

json fit_to_json(const FitResult& fit) {
  json j;
  j["family"] = fit_family_name(fit.family);
  if (fit.family == FitFamily::gaussian) {
    j["mu"] = fit.mu;
    j["sigma"] = fit.sigma;
  } else if (fit.family == FitFamily::poisson) {
    j["lambda"] = fit.lambda_rate;
  } else {
    j["r"] = fit.r;
    j["p"] = fit.p;
  }
  j["loglik"] = fit.loglik;
  j["aic"] = fit.aic();
  j["bic"] = fit.bic();
  return j;
}

json fit_degree_family(const std::vector<int>& degrees, double* negbin_p) {
  json out;
  std::vector<double> as_double(degrees.begin(), degrees.end());
  const FitResult* best = nullptr;
  FitResult gauss, pois, nb;
  bool have_gauss = false, have_pois = false, have_nb = false;
  try {
    gauss = fit_gaussian(as_double);
    out["gaussian"] = fit_to_json(gauss);
    have_gauss = true;
  } catch (const DegenerateSample& e) {
    out["gaussian"] = {{"error", e.what()}};
  }
  try {
    pois = fit_poisson(degrees);
    out["poisson"] = fit_to_json(pois);
    have_pois = true;
  } catch (const DegenerateSample& e) {
    out["poisson"] = {{"error", e.what()}};
  }
  try {
    nb = fit_negbin(degrees);
    out["negative_binomial"] = fit_to_json(nb);
    have_nb = true;
    if (negbin_p) *negbin_p = nb.p;
  } catch (const DegenerateSample& e) {
    out["negative_binomial"] = {{"error", e.what()}};
  }
  if (have_gauss && (!best || gauss.loglik > best->loglik)) best = &gauss;
  if (have_pois && (!best || pois.loglik > best->loglik)) best = &pois;
  if (have_nb && (!best || nb.loglik > best->loglik)) best = &nb;
  if (!best) throw DegenerateSample("no distribution family fits the degree data");
  out["best_by_loglik"] = fit_family_name(best->family);
  return out;
}

// ---------------------------------------------------------------------------
// Stages

void stage_prepare(StageRecorder& rec, const PipelineConfig& cfg) {
  if (!cfg.manifest.empty()) {
    rec.in_external(cfg.manifest);
    auto rows = read_csv(cfg.manifest);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() == 4 && rows[r][0] != "id") {
        rec.in_external(cfg.corpus_dir / rows[r][3]);
      }
    }
  }
  auto constitutions = load_corpus(cfg.corpus_dir, cfg.manifest);
  if (cfg.manifest.empty()) {
    for (const auto& c : constitutions) {
      rec.in_external(cfg.corpus_dir / (c.id + ".txt"));
    }
  }

  CorpusConfig corpus_cfg = cfg.corpus;
  if (!cfg.stopwords_file.empty()) {
    rec.in_external(cfg.stopwords_file);
    for (const auto& line : split_lines(read_text_file(cfg.stopwords_file))) {
      if (!line.empty()) corpus_cfg.stopwords.insert(line);
    }
  }

  auto prepared = prepare_corpus(constitutions, corpus_cfg);

  std::string vocab_text;
  for (const auto& tok : prepared.vocab.tokens) {
    vocab_text += tok;
    vocab_text += '\n';
  }
  rec.out("vocab.txt", vocab_text);
  rec.out("documents.jsonl", documents_jsonl_text(prepared.documents));

  std::map<std::string, int> doc_count;
  for (const auto& d : prepared.documents) ++doc_count[d.constitution_id];
  std::string csv = "id,country,year,n_documents\n";
  for (const auto& c : constitutions) {
    csv += csv_quote(c.id) + "," + csv_quote(c.country) + "," +
           std::to_string(c.year) + "," + std::to_string(doc_count[c.id]) + "\n";
  }
  rec.out("constitutions.csv", csv);
}

void stage_train(StageRecorder& rec, const PipelineConfig& cfg) {
  auto vocab_path = rec.in("vocab.txt");
  auto docs = read_documents_jsonl(rec.in("documents.jsonl"));
  auto vocab_lines = split_lines(read_text_file(vocab_path));
  const int vocab_size = static_cast<int>(vocab_lines.size());

  LdaHyperParams hyper = cfg.lda;
  hyper.seed = substream_seed(cfg.seed, "train");
  TopicModel model = gibbs_train(docs.documents, vocab_size, hyper);

  // beta.csv: strongest words per topic.
  std::string beta = "topic,token,probability\n";
  const int top = cfg.beta_top_words;
  for (int k = 0; k < model.num_topics; ++k) {
    std::vector<int> order(static_cast<std::size_t>(vocab_size));
    for (int w = 0; w < vocab_size; ++w) order[static_cast<std::size_t>(w)] = w;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      double pa = model.beta_at(k, a), pb = model.beta_at(k, b);
      if (pa != pb) return pa > pb;
      return a < b;
    });
    int take = top <= 0 ? vocab_size : std::min(top, vocab_size);
    for (int i = 0; i < take; ++i) {
      int w = order[static_cast<std::size_t>(i)];
      beta += std::to_string(k) + "," +
              csv_quote(vocab_lines[static_cast<std::size_t>(w)]) + "," +
              format_double(model.beta_at(k, w)) + "\n";
    }
  }
  rec.out("beta.csv", beta);

  std::string theta = "document_id,topic,proportion\n";
  for (std::size_t d = 0; d < docs.documents.size(); ++d) {
    for (int k = 0; k < model.num_topics; ++k) {
      theta += csv_quote(docs.ids[d]) + "," + std::to_string(k) + "," +
               format_double(model.theta_at(static_cast<int>(d), k)) + "\n";
    }
  }
  rec.out("theta.csv", theta);

  json meta;
  meta["k"] = model.num_topics;
  meta["alpha"] = model.alpha;
  meta["eta"] = model.eta;
  meta["iters"] = hyper.iters;
  meta["burn_in"] = hyper.effective_burn_in();
  meta["sample_every"] = hyper.sample_every;
  meta["seed"] = hyper.seed;
  meta["vocabulary_sha256"] = sha256_file_hex(vocab_path);
  meta["num_documents"] = docs.documents.size();
  meta["train_loglik_checkpoints"] = json::array();
  for (auto [sweep, ll] : model.train_loglik_checkpoints) {
    meta["train_loglik_checkpoints"].push_back({sweep, ll});
  }
  rec.out("model.json", meta.dump(2) + "\n");
}

void stage_select_k(StageRecorder& rec, const PipelineConfig& cfg) {
  auto vocab_path = rec.in("vocab.txt");
  auto docs = read_documents_jsonl(rec.in("documents.jsonl"));
  const int vocab_size =
      static_cast<int>(split_lines(read_text_file(vocab_path)).size());
  if (cfg.k_candidates.empty()) {
    throw ConfigError("select_k.candidates is empty");
  }

  LdaHyperParams hyper = cfg.lda;
  if (cfg.cv_iters > 0) hyper.iters = cfg.cv_iters;
  hyper.burn_in = cfg.lda.burn_in;
  hyper.seed = substream_seed(cfg.seed, "select-k");
  auto res = cross_validate(docs.documents, vocab_size, cfg.k_candidates,
                            cfg.cv_folds, hyper, cfg.cv_particles, cfg.threads);

  std::string csv = "k,fold,heldout_loglik\n";
  for (const auto& cell : res.cells) {
    csv += std::to_string(cell.k) + "," + std::to_string(cell.fold) + "," +
           format_double(cell.loglik) + "\n";
  }
  rec.out("cv.csv", csv);

  json summary;
  summary["selected_k"] = res.selected_k;
  summary["mean_heldout_loglik"] = json::array();
  for (auto [k, score] : res.scores) {
    summary["mean_heldout_loglik"].push_back({{"k", k}, {"loglik", score}});
  }
  rec.out("cv_summary.json", summary.dump(2) + "\n");
}

void stage_cascades(StageRecorder& rec, const PipelineConfig& cfg) {
  auto docs = read_documents_jsonl(rec.in("documents.jsonl"));
  auto [theta, num_topics] = read_theta_csv(rec.in("theta.csv"), docs.ids);
  auto constitutions = read_constitutions_csv(rec.in("constitutions.csv"));

  std::map<std::string, int> years;
  for (const auto& c : constitutions) years[c.id] = c.year;
  std::vector<std::string> doc_constitution;
  doc_constitution.reserve(docs.documents.size());
  for (const auto& d : docs.documents) doc_constitution.push_back(d.constitution_id);

  auto mixtures = constitution_mixture(theta, num_topics, doc_constitution, years);

  std::string csv = "constitution_id,year,topic,weight\n";
  for (const auto& m : mixtures) {
    for (int k = 0; k < num_topics; ++k) {
      csv += csv_quote(m.constitution_id) + "," + std::to_string(m.year) + "," +
             std::to_string(k) + "," +
             format_double(m.weights[static_cast<std::size_t>(k)]) + "\n";
    }
  }
  rec.out("mixtures.csv", csv);

  auto cascades = extract_cascades(mixtures, cfg.cascade);
  rec.out("cascades.json", cascades_json_text(cascades));
}

void stage_infer(StageRecorder& rec, const PipelineConfig& cfg) {
  auto cascades = read_cascades_json(rec.in("cascades.json"));
  auto constitutions = read_constitutions_csv(rec.in("constitutions.csv"));

  std::vector<NetworkNode> universe;
  std::map<std::string, std::string> country_of;
  for (const auto& c : constitutions) {
    universe.push_back({c.id, c.year});
    country_of[c.id] = c.country;
  }
  auto net = greedy_infer(cascades, cfg.diffusion, universe);

  std::string csv = "src_id,dst_id,src_year,dst_year,gain_at_insertion\n";
  for (const auto& e : net.edges) {
    const auto& s = net.nodes[static_cast<std::size_t>(e.src)];
    const auto& d = net.nodes[static_cast<std::size_t>(e.dst)];
    csv += csv_quote(s.id) + "," + csv_quote(d.id) + "," +
           std::to_string(s.year) + "," + std::to_string(d.year) + "," +
           format_double(e.gain) + "\n";
  }
  rec.out("network.csv", csv);
  rec.out("network.dot", network_dot_text(net, country_of));
}

void stage_sweep(StageRecorder& rec, const PipelineConfig& cfg) {
  auto mixtures = read_mixtures_csv(rec.in("mixtures.csv"));
  auto result = tau_sweep(mixtures, cfg.sweep_tau_grid, cfg.cascade,
                          cfg.diffusion, cfg.threads);

  std::string csv =
      "tau,n_edges,mean_indegree,std_indegree,mean_outdegree,std_outdegree\n";
  for (const auto& p : result.points) {
    csv += format_double(p.tau) + "," + std::to_string(p.n_edges) + "," +
           format_double(p.mean_indegree) + "," + format_double(p.std_indegree) +
           "," + format_double(p.mean_outdegree) + "," +
           format_double(p.std_outdegree) + "\n";
  }
  rec.out("sweep.csv", csv);

  auto matrix_csv = [&](const std::vector<std::vector<double>>& m) {
    std::string out = "tau";
    for (const auto& p : result.points) out += "," + format_double(p.tau);
    out += "\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
      out += format_double(result.points[i].tau);
      for (double v : m[i]) out += "," + format_double(v);
      out += "\n";
    }
    return out;
  };
  rec.out("sweep_corr_in.csv", matrix_csv(result.corr_in));
  rec.out("sweep_corr_out.csv", matrix_csv(result.corr_out));
}

void stage_tree(StageRecorder& rec, const PipelineConfig& cfg) {
  auto mixtures = read_mixtures_csv(rec.in("mixtures.csv"));
  auto constitutions = read_constitutions_csv(rec.in("constitutions.csv"));
  auto tree = build_family_tree(mixtures, cfg.kl_direction);

  std::string csv = "child_id,parent_id,kl\n";
  for (const auto& [child, parent] : tree.parent) {
    csv += csv_quote(child) + "," + csv_quote(parent) + "," +
           format_double(tree.divergence.at(child)) + "\n";
  }
  rec.out("family_tree.csv", csv);

  std::map<std::string, std::string> country_of;
  std::map<std::string, int> year_of;
  for (const auto& c : constitutions) {
    country_of[c.id] = c.country;
    year_of[c.id] = c.year;
  }
  std::string dot = "digraph family_tree {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const auto& m : mixtures) {
    std::string label = country_of.count(m.constitution_id)
                            ? country_of[m.constitution_id]
                            : m.constitution_id;
    label += "\\n" + std::to_string(m.year);
    dot += "  \"" + dot_escape(m.constitution_id) + "\" [label=\"" +
           dot_escape(label) + "\"];\n";
  }
  for (const auto& [child, parent] : tree.parent) {
    dot += "  \"" + dot_escape(parent) + "\" -> \"" + dot_escape(child) + "\";\n";
  }
  dot += "}\n";
  rec.out("family_tree.dot", dot);
}

void stage_stats(StageRecorder& rec, const PipelineConfig& cfg) {
  auto constitutions = read_constitutions_csv(rec.in("constitutions.csv"));
  auto net = read_network_csv(rec.in("network.csv"), constitutions);

  auto degrees = degree_sequences(net);
  std::string deg_csv = "id,year,indegree,outdegree\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    deg_csv += csv_quote(net.nodes[i].id) + "," +
               std::to_string(net.nodes[i].year) + "," +
               std::to_string(degrees.indegree[i]) + "," +
               std::to_string(degrees.outdegree[i]) + "\n";
  }
  rec.out("degrees.csv", deg_csv);

  json fits;
  double negbin_p_out = 0.0;
  fits["indegree"] = fit_degree_family(degrees.indegree, nullptr);
  fits["outdegree"] = fit_degree_family(degrees.outdegree, &negbin_p_out);
  if (negbin_p_out > 0.0) {
    // Under the pure-birth reading, the negative-binomial success
    // probability is e^{-lambda t}.
    fits["yule_lambda_t_implied"] = -std::log(negbin_p_out);
  }
  rec.out("fits.json", fits.dump(2) + "\n");

  // Communities on the subgraph of connected nodes; isolated ones get -1.
  auto undirected = undirected_view(net);
  std::vector<int> degree_u(static_cast<std::size_t>(undirected.n), 0);
  for (auto [a, b] : undirected.edges) {
    ++degree_u[static_cast<std::size_t>(a)];
    ++degree_u[static_cast<std::size_t>(b)];
  }
  std::vector<int> keep;
  std::vector<int> dense_index(static_cast<std::size_t>(undirected.n), -1);
  for (int i = 0; i < undirected.n; ++i) {
    if (degree_u[static_cast<std::size_t>(i)] > 0) {
      dense_index[static_cast<std::size_t>(i)] = static_cast<int>(keep.size());
      keep.push_back(i);
    }
  }
  UndirectedGraph dense;
  dense.n = static_cast<int>(keep.size());
  for (auto [a, b] : undirected.edges) {
    dense.edges.emplace_back(dense_index[static_cast<std::size_t>(a)],
                             dense_index[static_cast<std::size_t>(b)]);
  }
  std::vector<int> gn_labels(static_cast<std::size_t>(undirected.n), -1);
  std::vector<int> sp_labels(static_cast<std::size_t>(undirected.n), -1);
  if (dense.n > 0) {
    auto gn = girvan_newman(dense, cfg.gn_communities);
    auto sp = spectral_modularity(dense);
    for (std::size_t d = 0; d < keep.size(); ++d) {
      gn_labels[static_cast<std::size_t>(keep[d])] = gn[d];
      sp_labels[static_cast<std::size_t>(keep[d])] = sp.labels[d];
    }
  }
  std::string comm_csv = "id,gn_epoch,spectral_cluster\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    comm_csv += csv_quote(net.nodes[i].id) + "," + std::to_string(gn_labels[i]) +
                "," + std::to_string(sp_labels[i]) + "\n";
  }
  rec.out("communities.csv", comm_csv);

  auto motif_list = motifs(net);
  std::string motif_csv = "id,n_parents,n_children,taxonomy\n";
  for (const auto& m : motif_list) {
    motif_csv += csv_quote(m.constitution_id) + "," +
                 std::to_string(m.parents.size()) + "," +
                 std::to_string(m.children.size()) + "," +
                 taxonomy_name(m.taxonomy) + "\n";
  }
  rec.out("motifs.csv", motif_csv);

  // Growth: cumulative number of constitutions over the observed years.
  std::map<int, int> per_year;
  for (const auto& c : constitutions) ++per_year[c.year];
  std::vector<std::pair<int, double>> series;
  double cum = 0.0;
  for (auto [year, count] : per_year) {
    cum += count;
    series.emplace_back(year, cum);
  }
  auto growth = piecewise_growth(series, cfg.growth_max_segments);
  const auto& sel = growth.selected();
  std::string growth_csv = "year,cumulative,fitted\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    growth_csv += std::to_string(series[i].first) + "," +
                  format_double(series[i].second) + "," +
                  format_double(sel.fitted[i]) + "\n";
  }
  rec.out("growth.csv", growth_csv);

  json growth_json;
  growth_json["selected_segments"] = growth.selected_segments;
  growth_json["fits"] = json::array();
  for (const auto& f : growth.fits) {
    growth_json["fits"].push_back({{"segments", f.segments},
                                   {"breakpoints", f.breakpoints},
                                   {"slopes", f.slopes},
                                   {"intercept", f.intercept},
                                   {"sse", f.sse},
                                   {"bic", f.bic}});
  }
  rec.out("growth_model.json", growth_json.dump(2) + "\n");

  auto spans = lifespans(net);
  std::string life_csv = "id,year,lifespan\n";
  for (std::size_t i = 0; i < net.nodes.size(); ++i) {
    life_csv += csv_quote(net.nodes[i].id) + "," +
                std::to_string(net.nodes[i].year) + "," +
                std::to_string(spans[i]) + "\n";
  }
  rec.out("lifespans.csv", life_csv);

  YuleParams yule{cfg.yule_lambda, cfg.yule_n0, cfg.yule_t};
  auto simulated = simulate_yule(yule, cfg.yule_trials,
                                 substream_seed(cfg.seed, "yule"));
  std::map<int, double> sim_freq(simulated.begin(), simulated.end());
  int n_hi = yule.n0;
  for (auto [n, f] : sim_freq) n_hi = std::max(n_hi, n);
  while (yule_pmf(n_hi, yule) > 1e-12) ++n_hi;
  std::string yule_csv = "n,analytic_pmf,simulated_freq\n";
  for (int n = yule.n0; n <= n_hi; ++n) {
    double f = sim_freq.count(n) ? sim_freq[n] : 0.0;
    yule_csv += std::to_string(n) + "," + format_double(yule_pmf(n, yule)) + "," +
                format_double(f) + "\n";
  }
  rec.out("yule_check.csv", yule_csv);
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& cfg) {
  cfg.validate();
  auto start = std::chrono::steady_clock::now();
  StageRecorder rec(cfg);

  switch (stage) {
    case Stage::prepare: stage_prepare(rec, cfg); break;
    case Stage::train: stage_train(rec, cfg); break;
    case Stage::select_k: stage_select_k(rec, cfg); break;
    case Stage::cascades: stage_cascades(rec, cfg); break;
    case Stage::infer: stage_infer(rec, cfg); break;
    case Stage::sweep: stage_sweep(rec, cfg); break;
    case Stage::tree: stage_tree(rec, cfg); break;
    case Stage::stats: stage_stats(rec, cfg); break;
    case Stage::all:
      stage_prepare(rec, cfg);
      stage_train(rec, cfg);
      stage_cascades(rec, cfg);
      stage_infer(rec, cfg);
      stage_sweep(rec, cfg);
      stage_tree(rec, cfg);
      stage_stats(rec, cfg);
      break;
  }

  auto elapsed = std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count();
  json run;
  run["stage"] = stage_name(stage);
  run["seed"] = cfg.seed;
  run["threads"] = cfg.threads;
  run["config"] = json::parse(cfg.to_json_text());
  run["inputs"] = rec.inputs;
  run["outputs"] = rec.outputs;
  run["duration_seconds"] = elapsed;
  write_text_file(cfg.out_dir / "run.json", run.dump(2) + "\n");
}

}  // namespace ideatrace
