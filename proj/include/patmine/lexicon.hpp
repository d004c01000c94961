#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "patmine/diagnostics.hpp"

namespace patmine {

/// A set of canonical, lowercase, stopword-free terms.
using TermSet = std::set<std::string>;

/// Domain vocabulary: alias groups, multi-word phrase aliases, stopwords.
///
/// All terms are lowercase single alphanumeric tokens; phrase alias keys are
/// sequences of two or more such tokens. A term belongs to at most one alias
/// group and every group's canonical term is a member of its own group.
struct Lexicon {
  /// member token -> canonical token (canonicals map to themselves).
  std::map<std::string, std::string> alias_of;
  /// canonical -> sorted member list, kept for digests and reporting.
  std::map<std::string, std::vector<std::string>> groups;
  /// phrase word sequence -> canonical token, longest phrases first.
  std::vector<std::pair<std::vector<std::string>, std::string>> phrases;
  std::set<std::string> stopwords;

  /// Stable content digest (hex), echoed into run metadata.
  std::string digest() const;

  friend bool operator==(const Lexicon&, const Lexicon&) = default;
};

/// Builds and validates a lexicon from raw sections. Throws ValidationError
/// on a term in two groups, multi-token group members, or multi-token phrase
/// targets. Input casing is folded to lowercase.
Lexicon make_lexicon(
    const std::map<std::string, std::vector<std::string>>& alias_groups,
    const std::map<std::string, std::string>& phrase_aliases,
    const std::vector<std::string>& stopwords);

Lexicon load_lexicon(const std::filesystem::path& file);

/// Built-in vocabulary for the software-process domain. Used when no lexicon
/// file is given; extend per domain via a lexicon file.
const Lexicon& starter_lexicon();

/// Lowercases, applies phrase aliases longest-match-first, tokenizes on
/// non-alphanumeric runs, drops stopwords, and maps tokens to their group
/// canonicals. Empty input yields an empty set.
TermSet normalize(std::string_view text, const Lexicon& lexicon);

/// Normalizes each raw term and unions the results.
TermSet normalize_terms(const std::vector<std::string>& raw_terms,
                        const Lexicon& lexicon);

}  // namespace patmine
