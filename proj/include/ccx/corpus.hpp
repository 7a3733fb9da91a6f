#pragma once

// Synthetic contact corpus: speaker-tagged transcripts plus matched pre-contact
// records, all driven by one latent complexity z per contact. Also the on-disk
// formats (JSON lines for transcripts, CSV for pre-contact records).

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "ccx/common.hpp"

namespace ccx {

enum class Speaker { customer, agent };

inline const char* to_string(Speaker s) { return s == Speaker::agent ? "agent" : "customer"; }

struct Utterance {
  Speaker speaker = Speaker::customer;
  std::string text;
  bool operator==(const Utterance&) const = default;
};

struct Transcript {
  std::string id;
  std::vector<Utterance> utterances;
  int label = 0;
  std::string group = "background";
  bool operator==(const Transcript&) const = default;
};

struct PreContactRecord {
  std::string contact_id;
  std::vector<double> numeric_features;
  std::vector<std::string> categorical_features;
  bool operator==(const PreContactRecord&) const = default;
};

struct Corpus {
  std::vector<Transcript> transcripts;
  std::vector<PreContactRecord> records;
  bool operator==(const Corpus&) const = default;
};

struct CorpusConfig {
  int n_contacts = 20000;
  int n_classes = 12;
  int core_vocab = 40;     // per class, Zipf-weighted, strongly class-indicative
  int rare_vocab = 60;     // per class, uniform, used more as z grows
  int shared_vocab = 100;  // ambiguous tokens not owned by any class
  double mixing = 0.7;     // off-topic token probability at z = 1
  double confuser_share = 0.5;  // off-topic tokens taken from the confuser product
  double rare_rate = 0.2;  // own-class rare token probability at z = 1
  double agent_base = 4.0;    // mean agent utterances at z = 0
  double agent_growth = 2.0;  // mean grows as agent_base * exp(agent_growth * z)
  double customer_ratio = 0.7;
  double tokens_per_utterance = 2.5;
  int n_numeric = 4;
  // Feature 0 tracks z in coarse buckets, feature 1 is a segment whose levels
  // carry a hidden complexity effect, the rest are uninformative.
  std::vector<int> categorical_cardinalities{6, 40, 1};
  std::string group = "background";
  std::uint64_t seed = 7;
  // Fixed properties of the simulated business (segment effects, product
  // price levels); shared by every corpus drawn from the same world.
  std::uint64_t world_seed = 2024;
};

inline void validate(const CorpusConfig& c) {
  if (c.n_classes <= 0) fail_usage("corpus config: n_classes must be positive");
  if (c.n_contacts <= 0) fail_usage("corpus config: n_contacts must be positive");
  if (c.core_vocab <= 0 || c.rare_vocab <= 0 || c.shared_vocab <= 0) {
    fail_usage("corpus config: vocabulary sizes must be positive");
  }
  if (c.mixing < 0.0 || c.mixing > 1.0) fail_usage("corpus config: mixing must lie in [0,1]");
  if (c.confuser_share < 0.0 || c.confuser_share > 1.0) fail_usage("corpus config: confuser_share must lie in [0,1]");
  if (c.rare_rate < 0.0 || c.rare_rate > 1.0) fail_usage("corpus config: rare_rate must lie in [0,1]");
  if (c.agent_base <= 0.0 || c.tokens_per_utterance < 1.0 || c.customer_ratio < 0.0) {
    fail_usage("corpus config: length parameters must be positive");
  }
  if (c.n_numeric < 0) fail_usage("corpus config: n_numeric must be non-negative");
  for (int card : c.categorical_cardinalities) {
    if (card <= 0) fail_usage("corpus config: categorical cardinalities must be positive");
  }
}

// Token spelling: base-20 syllable digits, at least three syllables.
inline std::string word_for(int id) {
  static constexpr const char* kSyllables[20] = {"ka", "lo", "mi", "nu", "pe", "ra", "si", "to", "vu", "ze",
                                                 "ba", "do", "fi", "gu", "he", "ja", "ko", "li", "mo", "ne"};
  std::string w;
  int v = id;
  for (int i = 0; i < 3 || v > 0; ++i) {
    w += kSyllables[v % 20];
    v /= 20;
  }
  return w;
}

struct World {
  std::vector<double> segment_effect;  // per level of categorical feature 1
  std::vector<double> product_level;   // per class, mean of numeric feature 2
};

inline World make_world(const CorpusConfig& c) {
  std::mt19937_64 rng(c.world_seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  World w;
  int segments = c.categorical_cardinalities.size() > 1 ? c.categorical_cardinalities[1] : 0;
  for (int s = 0; s < segments; ++s) w.segment_effect.push_back(u(rng));
  for (int k = 0; k < c.n_classes; ++k) w.product_level.push_back(4.0 * u(rng));
  return w;
}

namespace detail {

inline int core_word(const CorpusConfig& c, int cls, int rank) { return cls * (c.core_vocab + c.rare_vocab) + rank; }
inline int rare_word(const CorpusConfig& c, int cls, int r) { return cls * (c.core_vocab + c.rare_vocab) + c.core_vocab + r; }
inline int shared_word(const CorpusConfig& c, int s) { return c.n_classes * (c.core_vocab + c.rare_vocab) + s; }

inline std::vector<double> zipf_cdf(int n) {
  std::vector<double> cdf(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (int r = 0; r < n; ++r) cdf[static_cast<std::size_t>(r)] = (acc += 1.0 / (r + 1.0));
  for (double& x : cdf) x /= acc;
  return cdf;
}

inline int draw_cdf(const std::vector<double>& cdf, double u) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return static_cast<int>(it - cdf.begin());
}

}  // namespace detail

// Tokens of `cls`'s own vocabulary (core and rare), spelled as emitted.
inline std::unordered_set<std::string> own_vocabulary(const CorpusConfig& c, int cls) {
  std::unordered_set<std::string> out;
  for (int r = 0; r < c.core_vocab; ++r) out.insert(word_for(detail::core_word(c, cls, r)));
  for (int r = 0; r < c.rare_vocab; ++r) out.insert(word_for(detail::rare_word(c, cls, r)));
  return out;
}

inline Transcript generate_transcript(const CorpusConfig& c, std::string id, int label, double z, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto zipf = detail::zipf_cdf(c.core_vocab);

  std::poisson_distribution<int> agent_pois(c.agent_base * std::exp(c.agent_growth * z));
  int n_agent = std::max(1, agent_pois(rng));
  int n_customer = 1;
  if (c.customer_ratio > 0.0) {
    std::poisson_distribution<int> cust_pois(c.customer_ratio * n_agent);
    n_customer = std::max(1, cust_pois(rng));
  }
  std::poisson_distribution<int> tok_pois(c.tokens_per_utterance - 1.0);

  // Off-topic tokens come from one confuser product, as when a customer's
  // issue spans two products, or from the shared pool.
  int confuser = -1;
  if (c.n_classes > 1) {
    confuser = std::min(static_cast<int>(u(rng) * (c.n_classes - 1)), c.n_classes - 2);
    if (confuser >= label) ++confuser;
  }

  auto draw_token = [&]() {
    if (u(rng) < c.mixing * z) {
      if (confuser >= 0 && u(rng) < c.confuser_share) {
        return word_for(detail::core_word(c, confuser, detail::draw_cdf(zipf, u(rng))));
      }
      int s = std::min(static_cast<int>(u(rng) * c.shared_vocab), c.shared_vocab - 1);
      return word_for(detail::shared_word(c, s));
    }
    if (u(rng) < c.rare_rate * z) {
      int r = std::min(static_cast<int>(u(rng) * c.rare_vocab), c.rare_vocab - 1);
      return word_for(detail::rare_word(c, label, r));
    }
    return word_for(detail::core_word(c, label, detail::draw_cdf(zipf, u(rng))));
  };

  auto make_utterance = [&](Speaker who) {
    int n_tok = 1 + tok_pois(rng);
    std::string text;
    for (int t = 0; t < n_tok; ++t) {
      if (t) text += ' ';
      text += draw_token();
    }
    text += '.';
    return Utterance{who, std::move(text)};
  };

  Transcript tr;
  tr.id = std::move(id);
  tr.label = label;
  tr.group = c.group;
  // Customer opens; speakers alternate until one side runs out.
  int a = 0, k = 0;
  while (a < n_agent || k < n_customer) {
    if (k < n_customer) {
      tr.utterances.push_back(make_utterance(Speaker::customer));
      ++k;
    }
    if (a < n_agent) {
      tr.utterances.push_back(make_utterance(Speaker::agent));
      ++a;
    }
  }
  return tr;
}

inline PreContactRecord generate_record(const CorpusConfig& c, const World& w, std::string id, int label, double z,
                                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g(0.0, 1.0);

  PreContactRecord r;
  r.contact_id = std::move(id);
  for (int j = 0; j < c.n_numeric; ++j) {
    double v = 0.0;
    switch (j) {
      case 0: {  // prior contacts in the last 90 days
        std::poisson_distribution<int> p(0.5 + 5.0 * z);
        v = p(rng);
        break;
      }
      case 1:  // account age, mildly lower for complex contacts
        v = std::exp(g(rng)) * (1.0 - 0.4 * z);
        break;
      case 2:  // order value, driven by product
        v = w.product_level[static_cast<std::size_t>(label)] + g(rng);
        break;
      case 3:  // minutes since last order
        v = 30.0 * std::exp(0.5 * g(rng) - 1.5 * z);
        break;
      default:
        v = g(rng);
    }
    r.numeric_features.push_back(v);
  }
  for (std::size_t f = 0; f < c.categorical_cardinalities.size(); ++f) {
    const int card = c.categorical_cardinalities[f];
    int level = 0;
    if (f == 0) {
      level = u(rng) < 0.5 ? static_cast<int>(z * card) : static_cast<int>(u(rng) * card);
    } else if (f == 1) {
      // Segment drawn near the contact's latent by effect similarity.
      std::vector<double> weights(static_cast<std::size_t>(card));
      for (int s = 0; s < card; ++s) {
        double d = w.segment_effect[static_cast<std::size_t>(s)] - z;
        weights[static_cast<std::size_t>(s)] = std::exp(-d * d / (2.0 * 0.1 * 0.1)) + 1e-3;
      }
      std::discrete_distribution<int> pick(weights.begin(), weights.end());
      level = pick(rng);
    } else {
      level = static_cast<int>(u(rng) * card);
    }
    level = std::clamp(level, 0, card - 1);
    r.categorical_features.push_back("v" + std::to_string(level));
  }
  return r;
}

struct GeneratedCorpus {
  Corpus corpus;
  std::vector<double> latents;  // never written to disk
};

inline std::string contact_id(int i) {
  std::string s = std::to_string(i);
  return "c" + std::string(s.size() < 7 ? 7 - s.size() : 0, '0') + s;
}

inline std::uint64_t contact_seed(const CorpusConfig& c, int i) { return mix_seed(c.seed, static_cast<std::uint64_t>(i)); }

// Contact i's transcript with its latent replaced by `z`; the remaining
// randomness (length draws, token draws) follows the same stream.
inline Transcript regenerate_transcript(const CorpusConfig& c, int i, int label, double z) {
  return generate_transcript(c, contact_id(i), label, z, mix_seed(contact_seed(c, i), 1));
}

inline GeneratedCorpus generate_corpus(const CorpusConfig& c) {
  validate(c);
  const World w = make_world(c);
  GeneratedCorpus out;
  out.corpus.transcripts.reserve(static_cast<std::size_t>(c.n_contacts));
  out.corpus.records.reserve(static_cast<std::size_t>(c.n_contacts));
  out.latents.reserve(static_cast<std::size_t>(c.n_contacts));
  for (int i = 0; i < c.n_contacts; ++i) {
    const std::uint64_t s = contact_seed(c, i);
    std::mt19937_64 rng(s);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double z = u(rng);
    const int label = std::min(static_cast<int>(u(rng) * c.n_classes), c.n_classes - 1);
    const std::string id = contact_id(i);
    out.corpus.transcripts.push_back(generate_transcript(c, id, label, z, mix_seed(s, 1)));
    out.corpus.records.push_back(generate_record(c, w, id, label, z, mix_seed(s, 2)));
    out.latents.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transcript file: one JSON object per line.

inline std::string to_json_line(const Transcript& t) {
  nlohmann::ordered_json j;
  j["id"] = t.id;
  j["label"] = t.label;
  j["group"] = t.group;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& u : t.utterances) {
    nlohmann::ordered_json o;
    o["speaker"] = to_string(u.speaker);
    o["text"] = u.text;
    arr.push_back(std::move(o));
  }
  j["utterances"] = std::move(arr);
  return j.dump();
}

inline bool has_token(const std::string& text) {
  return std::any_of(text.begin(), text.end(), [](unsigned char ch) { return std::isalnum(ch) != 0; });
}

inline Transcript parse_transcript_line(const std::string& line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    fail_data(where + ": invalid JSON (" + e.what() + ")");
  }
  if (!j.is_object()) fail_data(where + ": record is not an object");
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) fail_data(where + ": missing field '" + key + "'");
    return j.at(key);
  };
  Transcript t;
  const auto& id = need("id");
  if (!id.is_string() || id.get<std::string>().empty()) fail_data(where + ": field 'id' must be a non-empty string");
  t.id = id.get<std::string>();
  const auto& label = need("label");
  if (!label.is_number_integer() || label.get<long long>() < 0) {
    fail_data(where + ": field 'label' must be a non-negative integer");
  }
  t.label = label.get<int>();
  const auto& group = need("group");
  if (!group.is_string()) fail_data(where + ": field 'group' must be a string");
  t.group = group.get<std::string>();
  const auto& utts = need("utterances");
  if (!utts.is_array() || utts.empty()) fail_data(where + ": field 'utterances' must be a non-empty list");
  bool any_agent = false;
  for (const auto& u : utts) {
    if (!u.is_object() || !u.contains("speaker") || !u.contains("text")) {
      fail_data(where + ": field 'utterances' entries need 'speaker' and 'text'");
    }
    const auto& sp = u.at("speaker");
    const auto& tx = u.at("text");
    if (!sp.is_string() || (sp != "customer" && sp != "agent")) {
      fail_data(where + ": field 'speaker' must be \"customer\" or \"agent\"");
    }
    if (!tx.is_string() || !has_token(tx.get<std::string>())) {
      fail_data(where + ": field 'text' must contain at least one token");
    }
    Utterance out{sp == "agent" ? Speaker::agent : Speaker::customer, tx.get<std::string>()};
    any_agent = any_agent || out.speaker == Speaker::agent;
    t.utterances.push_back(std::move(out));
  }
  if (!any_agent) fail_data(where + ": field 'utterances' has no agent utterance");
  return t;
}

inline void save_transcripts(const std::string& path, const std::vector<Transcript>& ts) {
  auto out = open_output(path);
  for (const auto& t : ts) out << to_json_line(t) << '\n';
  if (!out) fail_usage("write failed: " + path);
}

inline std::vector<Transcript> load_transcripts(const std::string& path) {
  auto in = open_input(path);
  std::vector<Transcript> ts;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto t = parse_transcript_line(line, line_no);
    if (!seen.insert(t.id).second) fail_data("line " + std::to_string(line_no) + ": duplicate field 'id' " + t.id);
    ts.push_back(std::move(t));
  }
  return ts;
}

// ---------------------------------------------------------------------------
// Pre-contact file: header `contact_id,n0..nK,c0..cJ`.

inline void save_records(const std::string& path, const std::vector<PreContactRecord>& rs) {
  auto out = open_output(path);
  std::size_t n_num = rs.empty() ? 0 : rs.front().numeric_features.size();
  std::size_t n_cat = rs.empty() ? 0 : rs.front().categorical_features.size();
  out << "contact_id";
  for (std::size_t j = 0; j < n_num; ++j) out << ",n" << j;
  for (std::size_t j = 0; j < n_cat; ++j) out << ",c" << j;
  out << '\n';
  for (const auto& r : rs) {
    if (r.numeric_features.size() != n_num || r.categorical_features.size() != n_cat) {
      fail_data("save_records: feature widths differ for " + r.contact_id);
    }
    out << r.contact_id;
    for (double v : r.numeric_features) out << ',' << format_double(v);
    for (const auto& s : r.categorical_features) out << ',' << s;
    out << '\n';
  }
  if (!out) fail_usage("write failed: " + path);
}

inline std::vector<PreContactRecord> load_records(const std::string& path) {
  auto in = open_input(path);
  std::vector<PreContactRecord> rs;
  std::string line;
  if (!std::getline(in, line)) return rs;
  const auto header = split(trim(line), ',');
  if (header.empty() || header[0] != "contact_id") fail_data("line 1: header must start with 'contact_id'");
  std::size_t n_num = 0, n_cat = 0;
  for (std::size_t i = 1; i < header.size(); ++i) {
    if (header[i] == "n" + std::to_string(n_num) && n_cat == 0) {
      ++n_num;
    } else if (header[i] == "c" + std::to_string(n_cat)) {
      ++n_cat;
    } else {
      fail_data("line 1: unexpected column '" + header[i] + "'");
    }
  }
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    auto cells = split(t, ',');
    if (cells.size() != header.size()) {
      fail_data(where + ": expected " + std::to_string(header.size()) + " fields, got " + std::to_string(cells.size()));
    }
    PreContactRecord r;
    r.contact_id = cells[0];
    if (r.contact_id.empty()) fail_data(where + ": field 'contact_id' is empty");
    if (!seen.insert(r.contact_id).second) fail_data(where + ": duplicate field 'contact_id' " + r.contact_id);
    for (std::size_t j = 0; j < n_num; ++j) {
      double v = parse_double(cells[1 + j], where + ": field '" + header[1 + j] + "'");
      if (!std::isfinite(v)) fail_data(where + ": field '" + header[1 + j] + "' is not finite");
      r.numeric_features.push_back(v);
    }
    for (std::size_t j = 0; j < n_cat; ++j) {
      if (cells[1 + n_num + j].empty()) fail_data(where + ": field '" + header[1 + n_num + j] + "' is empty");
      r.categorical_features.push_back(cells[1 + n_num + j]);
    }
    rs.push_back(std::move(r));
  }
  return rs;
}

inline constexpr const char* kTranscriptFile = "transcripts.jsonl";
inline constexpr const char* kRecordFile = "precontact.csv";

inline void save_corpus(const std::string& dir, const Corpus& c) {
  save_transcripts((std::filesystem::path(dir) / kTranscriptFile).string(), c.transcripts);
  save_records((std::filesystem::path(dir) / kRecordFile).string(), c.records);
}

// Every record must join to exactly one transcript.
inline void check_join(const Corpus& c) {
  std::unordered_set<std::string> ids;
  for (const auto& t : c.transcripts) ids.insert(t.id);
  if (c.records.size() != c.transcripts.size()) {
    fail_data("corpus: " + std::to_string(c.records.size()) + " pre-contact records for " +
              std::to_string(c.transcripts.size()) + " transcripts");
  }
  for (const auto& r : c.records) {
    if (!ids.count(r.contact_id)) fail_data("corpus: pre-contact record '" + r.contact_id + "' has no transcript");
  }
}

inline Corpus load_corpus(const std::string& dir) {
  Corpus c;
  c.transcripts = load_transcripts((std::filesystem::path(dir) / kTranscriptFile).string());
  c.records = load_records((std::filesystem::path(dir) / kRecordFile).string());
  check_join(c);
  return c;
}

}  // namespace ccx
