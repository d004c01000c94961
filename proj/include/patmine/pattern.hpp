#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "patmine/corpus.hpp"
#include "patmine/operators.hpp"

namespace patmine {

inline constexpr const char* kToolName = "patmine";
inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kLibraryFormat = "patmine-library/1";
inline constexpr const char* kUnexplored = "to be explored";
inline constexpr const char* kAbsentCell = "n.a";

enum class Granularity { Phase, Stage, Task };

std::string to_string(Granularity g);
Granularity granularity_from_string(const std::string& text);

/// One process pattern in the uniform formalism. The body holds child
/// pattern ids for PHASE and STAGE records and the ordered technique/step
/// texts for TASK records.
struct PatternRecord {
  std::string id;
  Granularity granularity = Granularity::Task;
  std::string name;
  std::string context;
  std::string problem;
  std::vector<std::string> body;
  std::set<std::string> roles;
  std::set<std::string> artifacts;
  std::set<std::string> related_patterns;
  std::string consequences = kUnexplored;
  std::set<ActivityRef> provenance;

  friend bool operator==(const PatternRecord&, const PatternRecord&) = default;
};

/// Stable content id: granularity + name + sorted provenance, hashed.
std::string pattern_id(Granularity granularity, const std::string& name,
                       const std::set<ActivityRef>& provenance);

struct StraddleRecord {
  ActivityRef ref;
  std::vector<std::string> frame_ids;

  friend bool operator==(const StraddleRecord&, const StraddleRecord&) = default;
};

struct PlacementRecord {
  ActivityRef ref;
  std::vector<std::string> frame_ids;
  /// Which operator evidence placed it: "synonym", "affinity",
  /// "synonym+affinity", or "score-only".
  std::string signal;

  friend bool operator==(const PlacementRecord&, const PlacementRecord&) = default;
};

struct UnassignedRecord {
  ActivityRef ref;
  std::string best_frame;
  double synonym_score = 0.0;
  double affinity_score = 0.0;

  friend bool operator==(const UnassignedRecord&, const UnassignedRecord&) = default;
};

struct SplitCandidate {
  ActivityRef ref;
  std::string name;
  std::size_t step_count = 0;

  friend bool operator==(const SplitCandidate&, const SplitCandidate&) = default;
};

enum class MergeKind { Unify, Supply, Split };

std::string to_string(MergeKind kind);
MergeKind merge_kind_from_string(const std::string& text);

/// One auditable decompose/merge decision.
struct MergeEvent {
  MergeKind kind = MergeKind::Unify;
  std::string frame_id;
  std::vector<ActivityRef> inputs;
  std::string rule_or_score;

  friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

using MergeLog = std::vector<MergeEvent>;

/// Everything the run report needs beyond the records themselves, persisted
/// with the library so a report can be regenerated from a saved file.
struct RunAudit {
  std::vector<PlacementRecord> placements;
  std::vector<StraddleRecord> straddlers;
  std::vector<UnassignedRecord> unassigned;
  std::vector<SplitCandidate> split_candidates;
  MergeLog merge_log;
  std::vector<std::string> warnings;

  friend bool operator==(const RunAudit&, const RunAudit&) = default;
};

struct RunMetadata {
  std::string tool = std::string(kToolName) + " " + kToolVersion;
  OperatorConfig config;
  std::string frames_mode = "sdlc";
  std::vector<std::string> frame_names;
  std::string lexicon_digest;
  std::map<std::string, std::string> flags;
  std::vector<std::string> notes;
  RunAudit audit;

  friend bool operator==(const RunMetadata&, const RunMetadata&) = default;
};

/// The extracted pattern library. Records keep their emission order: PHASE
/// records in frame order, then stages, then tasks.
struct PatternLibrary {
  std::string domain_name;
  std::vector<PatternRecord> records;
  RunMetadata run_metadata;

  const PatternRecord* find(const std::string& id) const;

  friend bool operator==(const PatternLibrary&, const PatternLibrary&) = default;
};

/// Checks library invariants: unique ids, containment forest (PHASE -> STAGE
/// -> TASK with exactly one parent each), resolvable and non-self related
/// links, non-empty provenance on STAGE/TASK records.
std::vector<Diagnostic> validate_library(const PatternLibrary& library);

}  // namespace patmine
