#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ideatrace {

struct RawConstitution {
  std::string id;
  std::string country;
  int year = 0;  // calendar year, valid range [1200, 2100]
  std::string text;
};

struct Vocabulary {
  std::vector<std::string> tokens;  // lexicographic, unique
  std::unordered_map<std::string, std::int32_t> index;

  std::size_t size() const { return tokens.size(); }
  bool contains(const std::string& t) const { return index.count(t) != 0; }
  std::int32_t at(const std::string& t) const;
};

// One fixed-length chunk of a single constitution, as a sparse bag of words.
struct Document {
  std::string constitution_id;
  int position = 0;  // chunk index within the constitution
  std::vector<std::pair<std::int32_t, std::int32_t>> counts;  // token id -> count, ascending

  std::int64_t token_total() const {
    std::int64_t n = 0;
    for (auto& [t, c] : counts) n += c;
    return n;
  }
};

struct CorpusConfig {
  int doc_len = 500;
  int min_count = 20;
  double max_doc_frac = 0.90;
  std::set<std::string> stopwords;  // empty set means the builtin English list

  void validate() const;
};

// The builtin English stopword list (the usual ~180-entry one).
const std::set<std::string>& english_stopwords();

// Maximal runs of ASCII letters, lowercased; everything else separates.
std::vector<std::string> tokenize(std::string_view text);

// tokenize, drop stopwords on the surface form, then stem what remains.
std::vector<std::string> tokenize_and_stem(std::string_view text,
                                           const std::set<std::string>& stopwords);

// Splits a token count n into chunk sizes: full chunks of l, with a final
// remainder kept on its own when at least l/2 and merged into the previous
// chunk otherwise. A constitution shorter than l/2 still yields one chunk.
std::vector<int> chunk_sizes(std::size_t n, int l);

// Frequency-filtered vocabulary: corpus count >= min_count and document
// frequency <= max_doc_frac, where document frequency is measured over
// provisional chunks of the unfiltered streams (same chunking rule).
Vocabulary build_vocabulary(
    const std::vector<std::vector<std::string>>& token_streams,
    const CorpusConfig& cfg);

std::vector<std::pair<std::int32_t, std::int32_t>> to_bow(
    const std::vector<std::string>& tokens, const Vocabulary& vocab);

// In-vocabulary tokens of each constitution chunked into Documents; no
// document crosses a constitution boundary.
std::vector<Document> chunk_documents(
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        tokens_per_constitution,
    const Vocabulary& vocab, int l);

// Reads a corpus directory. With a manifest CSV (id,country,year,filename)
// rows name the files; without one, every *.txt is taken and the name is
// parsed as <country>_<year>.txt. Result is sorted by (year, id).
std::vector<RawConstitution> load_corpus(const std::filesystem::path& corpus_dir,
                                         const std::filesystem::path& manifest);

struct PreparedCorpus {
  Vocabulary vocab;
  std::vector<Document> documents;
};

PreparedCorpus prepare_corpus(const std::vector<RawConstitution>& constitutions,
                              const CorpusConfig& cfg);

}  // namespace ideatrace
