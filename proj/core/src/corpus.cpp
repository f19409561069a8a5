#include "ideatrace/corpus.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "ideatrace/errors.hpp"
#include "ideatrace/stemmer.hpp"
#include "ideatrace/textio.hpp"

namespace ideatrace {

std::int32_t Vocabulary::at(const std::string& t) const {
  auto it = index.find(t);
  if (it == index.end()) throw UnknownToken("token not in vocabulary: " + t);
  return it->second;
}

void CorpusConfig::validate() const {
  if (doc_len < 1) throw ConfigError("corpus.doc_len must be >= 1");
  if (min_count < 0) throw ConfigError("corpus.min_count must be >= 0");
  if (!(max_doc_frac > 0.0 && max_doc_frac <= 1.0)) {
    throw ConfigError("corpus.max_doc_frac must be in (0, 1]");
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') {
      cur.push_back(static_cast<char>(c - 'A' + 'a'));
    } else if (c >= 'a' && c <= 'z') {
      cur.push_back(c);
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

std::vector<std::string> tokenize_and_stem(std::string_view text,
                                           const std::set<std::string>& stopwords) {
  std::vector<std::string> out;
  for (auto& tok : tokenize(text)) {
    if (stopwords.count(tok)) continue;
    out.push_back(stem_english(tok));
  }
  return out;
}

std::vector<int> chunk_sizes(std::size_t n, int l) {
  std::vector<int> sizes;
  if (n == 0) return sizes;
  std::size_t full = n / static_cast<std::size_t>(l);
  int rem = static_cast<int>(n % static_cast<std::size_t>(l));
  sizes.assign(full, l);
  if (rem > 0) {
    if (2 * rem >= l || sizes.empty()) {
      sizes.push_back(rem);
    } else {
      sizes.back() += rem;
    }
  }
  return sizes;
}

Vocabulary build_vocabulary(
    const std::vector<std::vector<std::string>>& token_streams,
    const CorpusConfig& cfg) {
  cfg.validate();
  bool any = false;
  for (const auto& s : token_streams) any = any || !s.empty();
  if (!any) throw EmptyVocabulary("no tokens in any stream");

  std::map<std::string, std::int64_t> total;
  std::map<std::string, std::int64_t> doc_freq;
  std::int64_t total_chunks = 0;

  std::unordered_set<std::string_view> seen;
  for (const auto& stream : token_streams) {
    for (const auto& tok : stream) ++total[tok];
    std::size_t offset = 0;
    for (int size : chunk_sizes(stream.size(), cfg.doc_len)) {
      ++total_chunks;
      seen.clear();
      for (int i = 0; i < size; ++i) seen.insert(stream[offset + i]);
      for (auto tok : seen) ++doc_freq[std::string(tok)];
      offset += static_cast<std::size_t>(size);
    }
  }

  Vocabulary vocab;
  for (const auto& [tok, count] : total) {
    if (count < cfg.min_count) continue;
    double frac = static_cast<double>(doc_freq[tok]) /
                  static_cast<double>(total_chunks);
    if (frac > cfg.max_doc_frac) continue;
    vocab.tokens.push_back(tok);  // std::map iteration is already sorted
  }
  if (vocab.tokens.empty()) {
    throw EmptyVocabulary("all tokens removed by frequency filters");
  }
  for (std::size_t i = 0; i < vocab.tokens.size(); ++i) {
    vocab.index.emplace(vocab.tokens[i], static_cast<std::int32_t>(i));
  }
  return vocab;
}

std::vector<std::pair<std::int32_t, std::int32_t>> to_bow(
    const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  std::map<std::int32_t, std::int32_t> counts;
  for (const auto& tok : tokens) ++counts[vocab.at(tok)];
  return {counts.begin(), counts.end()};
}

std::vector<Document> chunk_documents(
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        tokens_per_constitution,
    const Vocabulary& vocab, int l) {
  if (vocab.size() == 0) throw EmptyVocabulary("vocabulary is empty");
  std::vector<Document> documents;
  std::vector<std::string> in_vocab;
  for (const auto& [id, tokens] : tokens_per_constitution) {
    in_vocab.clear();
    for (const auto& tok : tokens) {
      if (vocab.contains(tok)) in_vocab.push_back(tok);
    }
    std::size_t offset = 0;
    int position = 0;
    for (int size : chunk_sizes(in_vocab.size(), l)) {
      Document doc;
      doc.constitution_id = id;
      doc.position = position++;
      std::vector<std::string> chunk(in_vocab.begin() + offset,
                                     in_vocab.begin() + offset + size);
      doc.counts = to_bow(chunk, vocab);
      documents.push_back(std::move(doc));
      offset += static_cast<std::size_t>(size);
    }
  }
  return documents;
}

namespace {

bool whitespace_only(std::string_view text) {
  for (char c : text) {
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r' && c != '\f' && c != '\v')
      return false;
  }
  return true;
}

void validate_constitution(const RawConstitution& c) {
  if (c.year < 1200 || c.year > 2100) {
    throw ConfigError("constitution '" + c.id + "' has year " +
                      std::to_string(c.year) + " outside [1200, 2100]");
  }
  if (whitespace_only(c.text)) {
    throw ConfigError("constitution '" + c.id + "' has empty text");
  }
}

}  // namespace

std::vector<RawConstitution> load_corpus(const std::filesystem::path& corpus_dir,
                                         const std::filesystem::path& manifest) {
  std::vector<RawConstitution> out;
  if (!manifest.empty()) {
    auto rows = read_csv(manifest);
    if (rows.empty()) throw ConfigError("manifest is empty: " + manifest.string());
    std::size_t first = 0;
    if (rows[0].size() >= 4 && rows[0][0] == "id") first = 1;  // header
    for (std::size_t r = first; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() != 4) {
        throw ConfigError("manifest row " + std::to_string(r + 1) +
                          " needs 4 fields (id,country,year,filename)");
      }
      RawConstitution c;
      c.id = row[0];
      c.country = row[1];
      c.year = parse_int(row[2], "manifest year");
      c.text = read_text_file(corpus_dir / row[3]);
      out.push_back(std::move(c));
    }
  } else {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(corpus_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const auto& path : files) {
      std::string stem = path.stem().string();
      auto pos = stem.rfind('_');
      if (pos == std::string::npos || pos + 1 >= stem.size()) {
        throw ConfigError("cannot parse '" + path.filename().string() +
                          "' as <country>_<year>.txt (and no manifest given)");
      }
      RawConstitution c;
      c.id = stem;
      c.country = stem.substr(0, pos);
      c.year = parse_int(stem.substr(pos + 1), "filename year");
      c.text = read_text_file(path);
      out.push_back(std::move(c));
    }
    if (out.empty()) {
      throw ConfigError("no .txt files found in " + corpus_dir.string());
    }
  }

  std::unordered_set<std::string> seen;
  for (const auto& c : out) {
    validate_constitution(c);
    if (!seen.insert(c.id).second) {
      throw ConfigError("duplicate constitution id: " + c.id);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.year, a.id) < std::tie(b.year, b.id);
  });
  return out;
}

PreparedCorpus prepare_corpus(const std::vector<RawConstitution>& constitutions,
                              const CorpusConfig& cfg) {
  cfg.validate();
  const auto& stopwords =
      cfg.stopwords.empty() ? english_stopwords() : cfg.stopwords;

  std::vector<std::pair<std::string, std::vector<std::string>>> streams;
  streams.reserve(constitutions.size());
  for (const auto& c : constitutions) {
    streams.emplace_back(c.id, tokenize_and_stem(c.text, stopwords));
  }

  std::vector<std::vector<std::string>> bare;
  bare.reserve(streams.size());
  for (auto& [id, tokens] : streams) bare.push_back(tokens);

  PreparedCorpus prepared;
  prepared.vocab = build_vocabulary(bare, cfg);
  prepared.documents = chunk_documents(streams, prepared.vocab, cfg.doc_len);
  return prepared;
}

}  // namespace ideatrace
