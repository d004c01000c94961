#include "patmine/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "json_util.hpp"

namespace patmine {
namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

/// Lowercase tokens split on non-alphanumeric runs (ASCII).
std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
    if (is_word_char(c)) {
      current.push_back(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

bool is_single_token(const std::string& term) {
  return !term.empty() &&
         std::all_of(term.begin(), term.end(), [](char c) { return is_word_char(c); });
}

uint64_t fnv1a(std::string_view data, uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string Lexicon::digest() const {
  uint64_t h = 1469598103934665603ull;
  for (const auto& [canonical, members] : groups) {
    h = fnv1a(canonical, h);
    h = fnv1a("=", h);
    for (const auto& m : members) {
      h = fnv1a(m, h);
      h = fnv1a(",", h);
    }
    h = fnv1a(";", h);
  }
  for (const auto& [words, target] : phrases) {
    for (const auto& w : words) {
      h = fnv1a(w, h);
      h = fnv1a(" ", h);
    }
    h = fnv1a(">", h);
    h = fnv1a(target, h);
    h = fnv1a(";", h);
  }
  for (const auto& s : stopwords) {
    h = fnv1a(s, h);
    h = fnv1a(",", h);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Lexicon make_lexicon(
    const std::map<std::string, std::vector<std::string>>& alias_groups,
    const std::map<std::string, std::string>& phrase_aliases,
    const std::vector<std::string>& stopwords) {
  Lexicon lex;

  for (const auto& [raw_canonical, raw_members] : alias_groups) {
    const std::string canonical = lowercase(raw_canonical);
    if (!is_single_token(canonical)) {
      throw ValidationError("alias group canonical '" + raw_canonical +
                            "' must be a single alphanumeric token");
    }
    std::set<std::string> members;
    members.insert(canonical);
    for (const auto& raw : raw_members) {
      const std::string member = lowercase(raw);
      if (!is_single_token(member)) {
        throw ValidationError("alias group member '" + raw + "' of '" + canonical +
                              "' must be a single token; use phrase_aliases for phrases");
      }
      members.insert(member);
    }
    for (const auto& member : members) {
      auto [it, inserted] = lex.alias_of.emplace(member, canonical);
      if (!inserted && it->second != canonical) {
        throw ValidationError("term '" + member + "' appears in two alias groups ('" +
                              it->second + "' and '" + canonical + "')");
      }
    }
    lex.groups[canonical] = std::vector<std::string>(members.begin(), members.end());
  }

  for (const auto& [raw_phrase, raw_target] : phrase_aliases) {
    std::vector<std::string> words = tokenize(raw_phrase);
    if (words.size() < 2) {
      throw ValidationError("phrase alias '" + raw_phrase +
                            "' must contain at least two words");
    }
    const std::string target = lowercase(raw_target);
    if (!is_single_token(target)) {
      throw ValidationError("phrase alias target '" + raw_target +
                            "' must be a single canonical term");
    }
    lex.phrases.emplace_back(std::move(words), target);
  }
  // Longest phrase first; ties resolve lexicographically for determinism.
  std::sort(lex.phrases.begin(), lex.phrases.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });

  for (const auto& raw : stopwords) {
    const std::string word = lowercase(raw);
    if (!is_single_token(word)) {
      throw ValidationError("stopword '" + raw + "' must be a single token");
    }
    lex.stopwords.insert(word);
  }
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& file) {
  const detail::Json doc = detail::parse_json_file(file);
  if (!doc.is_object()) {
    throw ParseError(file.string() + ": lexicon document must be an object");
  }

  std::map<std::string, std::vector<std::string>> groups;
  if (auto it = doc.find("alias_groups"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw ParseError(file.string() + ": alias_groups must map canonical -> member list");
    }
    for (const auto& [canonical, members] : it->items()) {
      if (!members.is_array()) {
        throw ParseError(file.string() + ": alias group '" + canonical +
                         "' must be an array of terms");
      }
      std::vector<std::string> list;
      for (const auto& m : members) {
        if (!m.is_string()) {
          throw ParseError(file.string() + ": alias group '" + canonical +
                           "' must be an array of strings");
        }
        list.push_back(m.get<std::string>());
      }
      groups[canonical] = std::move(list);
    }
  }

  std::map<std::string, std::string> phrases;
  if (auto it = doc.find("phrase_aliases"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) {
      throw ParseError(file.string() + ": phrase_aliases must map phrase -> canonical");
    }
    for (const auto& [phrase, target] : it->items()) {
      if (!target.is_string()) {
        throw ParseError(file.string() + ": phrase alias '" + phrase +
                         "' must map to a string");
      }
      phrases[phrase] = target.get<std::string>();
    }
  }

  std::vector<std::string> stopwords;
  if (auto it = doc.find("stopwords"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw ParseError(file.string() + ": stopwords must be an array");
    }
    for (const auto& s : *it) {
      if (!s.is_string()) {
        throw ParseError(file.string() + ": stopwords must be an array of strings");
      }
      stopwords.push_back(s.get<std::string>());
    }
  }

  return make_lexicon(groups, phrases, stopwords);
}

const Lexicon& starter_lexicon() {
  static const Lexicon lex = make_lexicon(
      {
          {"analysis",
           {"analyses", "analyze", "analyse", "analyzing", "assess", "assessment",
            "evaluate", "evaluating", "evaluation", "examine", "examination",
            "review", "reviewing", "survey", "surveying", "study", "definition"}},
          {"architecture", {"architectural", "architectures"}},
          {"artifact",
           {"artifacts", "artefact", "artefacts", "workproduct", "workproducts",
            "deliverable", "deliverables"}},
          {"asset",
           {"assets", "legacy", "existing", "portfolio", "portfolios",
            "infrastructure", "inventory", "automation"}},
          {"build",
           {"builds", "construction", "construct", "implementation", "implement",
            "implementing", "develop", "developing", "development", "code",
            "coding"}},
          {"deploy",
           {"deployment", "deploying", "release", "releases", "delivery",
            "deliver", "transition", "install", "installation", "rollout",
            "provision", "provisioning"}},
          {"design", {"designing", "designs"}},
          {"gather",
           {"gathering", "gathered", "elicit", "elicitation", "identification",
            "identify"}},
          {"initiate", {"initiation", "initiating", "inception", "kickoff"}},
          {"interview", {"interviews", "interviewing"}},
          {"maintain",
           {"maintenance", "maintaining", "support", "supporting", "evolve",
            "evolution", "operate", "operation", "operations"}},
          {"model", {"models", "modeling", "modelling"}},
          {"organization",
           {"organizations", "organisation", "organisations", "enterprise",
            "company", "business"}},
          {"plan", {"planning", "plans", "planned"}},
          {"process", {"processes"}},
          {"prototype", {"prototypes", "prototyping"}},
          {"requirement", {"requirements"}},
          {"role", {"roles"}},
          {"service", {"services"}},
          {"specification", {"specifications", "specify", "specifying"}},
          {"stakeholder", {"stakeholders"}},
          {"system", {"systems", "application", "applications"}},
          {"test",
           {"testing", "tests", "verification", "verify", "verifying",
            "validation", "validate", "validating"}},
          {"usecase", {"usecases"}},
      },
      {
          {"use case", "usecase"},
          {"use cases", "usecase"},
          {"organization model", "asset"},
          {"organization models", "asset"},
          {"business entity", "asset"},
          {"business entities", "asset"},
          {"business process", "asset"},
          {"business processes", "asset"},
      },
      {"a",    "an",   "and",  "are",  "as",   "at",   "be",   "by",
       "for",  "from", "how",  "in",   "into", "is",   "it",   "its",
       "of",   "on",   "or",   "over", "per",  "potential", "that", "the",
       "their", "this", "to",  "via",  "what", "when", "which", "with"});
  return lex;
}

TermSet normalize(std::string_view text, const Lexicon& lexicon) {
  const std::vector<std::string> tokens = tokenize(text);

  // Phrase pass: greedy longest-match-first over the token sequence.
  std::vector<std::string> collected;
  std::size_t i = 0;
  while (i < tokens.size()) {
    const std::pair<std::vector<std::string>, std::string>* matched = nullptr;
    for (const auto& phrase : lexicon.phrases) {
      const auto& words = phrase.first;
      if (words.size() > tokens.size() - i) continue;
      if (std::equal(words.begin(), words.end(), tokens.begin() + i)) {
        matched = &phrase;
        break;
      }
    }
    if (matched != nullptr) {
      collected.push_back(matched->second);
      i += matched->first.size();
    } else {
      collected.push_back(tokens[i]);
      ++i;
    }
  }

  TermSet out;
  for (const auto& token : collected) {
    if (lexicon.stopwords.count(token)) continue;
    auto it = lexicon.alias_of.find(token);
    const std::string& canonical = it != lexicon.alias_of.end() ? it->second : token;
    if (lexicon.stopwords.count(canonical)) continue;
    out.insert(canonical);
  }
  return out;
}

TermSet normalize_terms(const std::vector<std::string>& raw_terms,
                        const Lexicon& lexicon) {
  TermSet out;
  for (const auto& raw : raw_terms) {
    TermSet terms = normalize(raw, lexicon);
    out.insert(terms.begin(), terms.end());
  }
  return out;
}

}  // namespace patmine
