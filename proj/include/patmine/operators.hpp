#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "patmine/lexicon.hpp"

namespace patmine {

enum class ClusteringMode { SeedStar, Components };

std::string to_string(ClusteringMode mode);
ClusteringMode clustering_mode_from_string(const std::string& text);

/// Thresholds and tie rules for the matching operators plus the pipeline
/// knobs that ride along with them. Everything here is echoed into run
/// metadata.
struct OperatorConfig {
  double tau_syn = 0.5;
  double tau_aff = 0.4;
  double epsilon_straddle = 0.1;
  ClusteringMode clustering_mode = ClusteringMode::SeedStar;
  /// Activities with more steps than this are reported as split candidates.
  int split_flag_threshold = 12;
  /// How many top intent terms name a multi-member stage.
  int stage_name_terms = 2;

  /// Throws ConfigError when a fraction leaves [0,1] or a count is < 1.
  void validate() const;

  friend bool operator==(const OperatorConfig&, const OperatorConfig&) = default;
};

/// Reads a run configuration document; absent fields keep their defaults.
OperatorConfig load_operator_config(const std::filesystem::path& file);

enum class Completeness { FirstMore, SecondMore, Equal };

struct OpResult {
  bool decision = false;
  double score = 0.0;
};

/// |intersection| / |union|; both empty -> 0.
double jaccard(const TermSet& a, const TermSet& b);

/// Name equivalence: Jaccard over normalized name term sets, decided against
/// tau_syn. When both names normalize to nothing the score is 1 iff the raw
/// names are equal after lowercasing.
OpResult synonym(std::string_view name_a, std::string_view name_b,
                 const Lexicon& lexicon, const OperatorConfig& cfg);

/// Intent closeness: Jaccard over already-normalized intent sets, decided
/// against tau_aff. Two empty intents never match.
OpResult semantic_affinity(const TermSet& intent_a, const TermSet& intent_b,
                           const OperatorConfig& cfg);

/// Completeness order: step count first, then total artifact count as the
/// tiebreak. Works on any type exposing steps/input_artifacts/
/// output_artifacts.
template <class A, class B>
Completeness more_complete(const A& a, const B& b) {
  if (a.steps.size() != b.steps.size()) {
    return a.steps.size() > b.steps.size() ? Completeness::FirstMore
                                           : Completeness::SecondMore;
  }
  const std::size_t arts_a = a.input_artifacts.size() + a.output_artifacts.size();
  const std::size_t arts_b = b.input_artifacts.size() + b.output_artifacts.size();
  if (arts_a != arts_b) {
    return arts_a > arts_b ? Completeness::FirstMore : Completeness::SecondMore;
  }
  return Completeness::Equal;
}

}  // namespace patmine
