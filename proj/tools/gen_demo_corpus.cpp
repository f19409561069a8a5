// Generates the bundled synthetic demo corpus: twenty fictional
// constitutions whose wording mixes five planted themes, with theme usage
// drifting over the years so that topic cascades have temporal structure.
// Run once with a fixed seed; the outputs under data/demo are committed.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ideatrace/rng.hpp"
#include "ideatrace/textio.hpp"

namespace {

struct Theme {
  const char* name;
  std::vector<const char*> words;
};

const std::vector<Theme> kThemes = {
    {"rights",
     {"right", "freedom", "liberty", "citizen", "person", "speech", "press",
      "religion", "conscience", "assembly", "petition", "equality", "dignity",
      "protection", "privacy", "expression", "belief", "worship", "movement",
      "association", "opinion", "fair", "trial", "counsel", "accused",
      "innocent", "punishment", "torture", "slavery", "servitude",
      "discrimination", "minority", "woman", "child", "family", "education",
      "culture", "language", "heritage", "conviction"}},
    {"legislature",
     {"president", "minister", "parliament", "congress", "senate", "deputy",
      "chamber", "session", "vote", "majority", "quorum", "bill", "decree",
      "veto", "dissolution", "election", "term", "office", "oath", "cabinet",
      "council", "committee", "speaker", "motion", "debate", "amendment",
      "procedure", "mandate", "delegation", "appointment", "resignation",
      "succession", "impeachment", "legislature", "statute", "promulgation",
      "adjournment", "convocation", "ballot", "electorate"}},
    {"justice",
     {"court", "judge", "justice", "tribunal", "appeal", "supreme",
      "jurisdiction", "legal", "judicial", "magistrate", "prosecutor",
      "defense", "verdict", "sentence", "evidence", "witness", "jury",
      "civil", "criminal", "penal", "code", "litigation", "review",
      "precedent", "independence", "tenure", "removal", "discipline",
      "advocate", "hearing", "ruling", "injunction", "remedy", "damages",
      "arbitration", "mediation", "acquittal", "indictment", "warrant",
      "custody"}},
    {"economy",
     {"budget", "tax", "revenue", "treasury", "finance", "currency", "bank",
      "credit", "debt", "loan", "expenditure", "audit", "property", "land",
      "commerce", "trade", "industry", "labor", "wage", "contract", "market",
      "enterprise", "monopoly", "tariff", "customs", "subsidy", "pension",
      "insurance", "welfare", "agriculture", "resource", "mineral", "forest",
      "water", "energy", "infrastructure", "transport", "accounting",
      "investment", "harvest"}},
    {"defense",
     {"army", "navy", "force", "war", "peace", "treaty", "alliance",
      "neutrality", "border", "territory", "sovereignty", "nation", "flag",
      "anthem", "capital", "citizenship", "naturalization", "foreign",
      "diplomat", "ambassador", "consul", "international", "convention",
      "ratification", "mobilization", "conscription", "militia", "officer",
      "command", "emergency", "martial", "occupation", "ceasefire",
      "armistice", "negotiation", "frontier", "garrison", "fleet", "regiment",
      "patrol"}},
};

// High-frequency legal boilerplate; appears in nearly every chunk so the
// document-frequency filter has something to prune.
const std::vector<const char*> kBoilerplate = {
    "shall", "article", "section", "state", "law", "provision", "chapter"};

// Connectives drawn from the stopword list; removed during preparation.
const std::vector<const char*> kConnectives = {
    "the", "of", "and", "to", "in", "by", "for", "with", "under", "this"};

struct Country {
  const char* name;
  int year;
};

const std::vector<Country> kCountries = {
    {"arcadia", 1789},   {"borealia", 1791},  {"cascara", 1812},
    {"dorwall", 1814},   {"elandia", 1831},   {"fenmark", 1848},
    {"galdova", 1853},   {"hesperia", 1871},  {"ithriel", 1874},
    {"jorvika", 1889},   {"kestrelia", 1901}, {"lumengard", 1917},
    {"meridia", 1920},   {"novara", 1936},    {"ostravia", 1947},
    {"pellamar", 1958},  {"quintara", 1972},  {"rhodessa", 1988},
    {"serenova", 1993},  {"tyrenia", 2008},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"writes the synthetic demo corpus"};
  std::string out_dir = "data/demo";
  std::uint64_t seed = 20080101;
  int words_per_constitution = 2600;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--words", words_per_constitution, "words per constitution");
  CLI11_PARSE(app, argc, argv);

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  ideatrace::Rng rng(seed);
  const int n_themes = static_cast<int>(kThemes.size());

  std::string manifest = "id,country,year,filename\n";
  for (std::size_t ci = 0; ci < kCountries.size(); ++ci) {
    const auto& country = kCountries[ci];

    // Theme mixture: one era-dominant theme, one secondary, a light
    // uniform background. Eras advance with the chronological index.
    int dominant = static_cast<int>(ci * kThemes.size() / kCountries.size());
    int secondary = static_cast<int>(rng.below(n_themes));
    std::vector<double> mix(n_themes, 0.03);
    mix[dominant] += 0.60;
    mix[secondary] += 0.22;

    // Zipf-like weights inside each theme.
    std::vector<std::vector<double>> word_weights;
    for (const auto& theme : kThemes) {
      std::vector<double> w(theme.words.size());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 / (1.0 + i);
      word_weights.push_back(std::move(w));
    }

    std::string text = "THE CONSTITUTION OF " + std::string(country.name) +
                       ", adopted " + std::to_string(country.year) + ".\n\n";
    int words_written = 0;
    int sentence_len = 0;
    int article = 1;
    std::string sentence;
    while (words_written < words_per_constitution) {
      if (sentence_len == 0) {
        if (rng.uniform01() < 0.18) {
          text += "Article " + std::to_string(article++) + ".\n";
        }
        sentence = "";
      }
      std::string word;
      double u = rng.uniform01();
      if (u < 0.22) {
        word = kConnectives[rng.below(kConnectives.size())];
      } else if (u < 0.34) {
        word = kBoilerplate[rng.below(kBoilerplate.size())];
        ++words_written;
      } else {
        int theme = static_cast<int>(rng.discrete(mix));
        int pick = static_cast<int>(rng.discrete(word_weights[theme]));
        word = kThemes[static_cast<std::size_t>(theme)].words[pick];
        ++words_written;
      }
      if (sentence.empty()) {
        word[0] = static_cast<char>(word[0] - 'a' + 'A');
        sentence = word;
      } else {
        sentence += (rng.uniform01() < 0.06 ? ", " : " ") + word;
      }
      ++sentence_len;
      if (sentence_len >= 8 && rng.uniform01() < 0.25) {
        text += sentence + ".\n";
        sentence_len = 0;
      }
    }
    if (sentence_len > 0) text += sentence + ".\n";

    std::string id = std::string(country.name) + "_" + std::to_string(country.year);
    std::string filename = id + ".txt";
    ideatrace::write_text_file(fs::path(out_dir) / filename, text);
    manifest += id + "," + country.name + "," + std::to_string(country.year) +
                "," + filename + "\n";
  }
  ideatrace::write_text_file(fs::path(out_dir) / "manifest.csv", manifest);
  std::printf("wrote %zu constitutions to %s\n", kCountries.size(), out_dir.c_str());
  return 0;
}
