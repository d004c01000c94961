#pragma once

#include <compare>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "patmine/diagnostics.hpp"

namespace patmine {

struct Step {
  int index = 0;
  std::string description;

  friend bool operator==(const Step&, const Step&) = default;
};

/// An internal activity of an SDM: name, home phase, declared intent terms,
/// ordered steps, and the roles and artifacts around it.
struct Activity {
  std::string id;
  std::string name;
  std::string phase_id;
  std::vector<std::string> intent_terms;
  std::vector<Step> steps;
  std::set<std::string> roles;
  std::set<std::string> input_artifacts;
  std::set<std::string> output_artifacts;

  friend bool operator==(const Activity&, const Activity&) = default;
};

struct SdmPhase {
  std::string id;
  std::string name;
  std::vector<std::string> intent_terms;
  int order = 0;

  friend bool operator==(const SdmPhase&, const SdmPhase&) = default;
};

/// One software development methodology in the uniform template structure.
struct Sdm {
  std::string id;
  std::string name;
  std::string overview;
  std::vector<SdmPhase> phases;
  std::vector<Activity> activities;

  const SdmPhase* find_phase(const std::string& phase_id) const;

  friend bool operator==(const Sdm&, const Sdm&) = default;
};

struct Corpus {
  std::string domain_name;
  std::vector<Sdm> sdms;
  /// Marks the SDMs with the most complete life cycle; enables derived
  /// frame mode.
  std::set<std::string> baseline_sdm_ids;

  const Sdm* find_sdm(const std::string& sdm_id) const;
  std::size_t total_activities() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

/// Identifies one source activity across the corpus.
struct ActivityRef {
  std::string sdm_id;
  std::string activity_id;

  std::string key() const { return sdm_id + ":" + activity_id; }

  friend auto operator<=>(const ActivityRef&, const ActivityRef&) = default;
};

const Activity* find_activity(const Corpus& corpus, const ActivityRef& ref);

/// Structural parse of a corpus directory (one JSON document per SDM plus an
/// optional manifest.json). Throws IoError on a missing/unreadable path and
/// ParseError on malformed documents. Model invariants are left to
/// validate_corpus. SDM document order is the lexicographic filename order,
/// independent of directory enumeration order.
Corpus parse_corpus(const std::filesystem::path& dir);

/// Checks every model invariant and returns diagnostics; empty result means
/// the corpus is valid.
std::vector<Diagnostic> validate_corpus(const Corpus& corpus);

/// parse_corpus followed by validation; throws ValidationError naming the
/// offending SDM/activity when any error-severity diagnostic is present.
Corpus ingest_corpus(const std::filesystem::path& dir);

/// Writes the corpus back out in the ingestion format (manifest.json plus
/// one NN_<sdm-id>.json document per SDM, numbered in corpus order).
void write_corpus(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace patmine
