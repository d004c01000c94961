#include "patmine/operators.hpp"

#include <algorithm>
#include <cctype>

#include "patmine/diagnostics.hpp"

namespace patmine {
namespace {

std::string lowercase(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

void check_fraction(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0,1]");
  }
}

}  // namespace

std::string to_string(ClusteringMode mode) {
  return mode == ClusteringMode::SeedStar ? "seed_star" : "components";
}

ClusteringMode clustering_mode_from_string(const std::string& text) {
  if (text == "seed_star" || text == "seed-star") return ClusteringMode::SeedStar;
  if (text == "components") return ClusteringMode::Components;
  throw ConfigError("unknown clustering mode '" + text +
                    "' (expected seed_star or components)");
}

void OperatorConfig::validate() const {
  check_fraction(tau_syn, "tau_syn");
  check_fraction(tau_aff, "tau_aff");
  check_fraction(epsilon_straddle, "epsilon_straddle");
  if (split_flag_threshold < 1) {
    throw ConfigError("split_flag_threshold must be >= 1");
  }
  if (stage_name_terms < 1) {
    throw ConfigError("stage_name_terms must be >= 1");
  }
}

double jaccard(const TermSet& a, const TermSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t intersection = 0;
  for (const auto& term : a) {
    if (b.count(term)) ++intersection;
  }
  const std::size_t unionsize = a.size() + b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unionsize);
}

OpResult synonym(std::string_view name_a, std::string_view name_b,
                 const Lexicon& lexicon, const OperatorConfig& cfg) {
  const TermSet terms_a = normalize(name_a, lexicon);
  const TermSet terms_b = normalize(name_b, lexicon);
  double score;
  if (terms_a.empty() && terms_b.empty()) {
    score = lowercase(name_a) == lowercase(name_b) ? 1.0 : 0.0;
  } else {
    score = jaccard(terms_a, terms_b);
  }
  return {score >= cfg.tau_syn, score};
}

OpResult semantic_affinity(const TermSet& intent_a, const TermSet& intent_b,
                           const OperatorConfig& cfg) {
  if (intent_a.empty() && intent_b.empty()) {
    return {false, 0.0};
  }
  const double score = jaccard(intent_a, intent_b);
  return {score >= cfg.tau_aff, score};
}

}  // namespace patmine
