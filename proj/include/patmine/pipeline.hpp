#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "patmine/corpus.hpp"
#include "patmine/lexicon.hpp"
#include "patmine/operators.hpp"
#include "patmine/pattern.hpp"

namespace patmine {

/// A phase-level frame that buckets activities during decomposition.
struct PhaseFrame {
  std::string id;
  std::string name;
  TermSet intent_terms;
  int order = 0;
  /// Contributing (sdm, phase) pairs; empty for built-in and file frames.
  std::set<ActivityRef> provenance;

  friend bool operator==(const PhaseFrame&, const PhaseFrame&) = default;
};

enum class FramesMode { Sdlc, Derived, File };

std::string to_string(FramesMode mode);
FramesMode frames_mode_from_string(const std::string& text);

/// Frame selection. sdlc yields the six built-in life-cycle frames; derived
/// unifies the baseline SDMs' phases pairwise by name synonymy (keeping the
/// earlier name); file loads frames as listed. Throws ConfigError when
/// derived mode has no baselines or the frames file is empty/missing.
std::vector<PhaseFrame> determine_phase_frames(
    const Corpus& corpus, FramesMode mode, const Lexicon& lexicon,
    const OperatorConfig& cfg,
    const std::optional<std::filesystem::path>& frames_file = std::nullopt);

/// Where one activity landed and on what evidence.
struct PlacementScore {
  std::string frame_id;
  double synonym_score = 0.0;
  double affinity_score = 0.0;

  double best() const {
    return synonym_score > affinity_score ? synonym_score : affinity_score;
  }
};

struct Assignment {
  /// Every frame each activity was assigned to (straddlers have >= 2).
  std::map<ActivityRef, std::set<std::string>> placements;
  /// The single best-scoring frame; the bucket the activity is processed in.
  std::map<ActivityRef, std::string> primary;
  /// Which evidence fired at the primary frame: "synonym", "affinity",
  /// "synonym+affinity", or "score-only".
  std::map<ActivityRef, std::string> signals;
  std::vector<UnassignedRecord> unassigned;
  std::vector<ActivityRef> straddlers;
};

/// Positions every activity against the frames. Per frame the score is the
/// best of the phase-name synonym score and the activity-intent affinity
/// score; the activity is unassigned when the best overall score passes
/// neither threshold, otherwise it joins every frame within
/// epsilon_straddle of the best.
Assignment decompose(const Corpus& corpus, const std::vector<PhaseFrame>& frames,
                     const Lexicon& lexicon, const OperatorConfig& cfg);

/// An activity flowing through the pipeline, with full provenance and the
/// merge decisions that produced it.
struct WorkingActivity {
  std::string canonical_id;
  std::string name;
  TermSet intent;
  std::vector<Step> steps;
  std::set<std::string> roles;
  std::set<std::string> input_artifacts;
  std::set<std::string> output_artifacts;
  std::set<ActivityRef> provenance;
  /// Union of the frame placements of every contributing source.
  std::set<std::string> frames;
  std::string home_frame;
  std::vector<MergeEvent> merge_history;

  friend bool operator==(const WorkingActivity&, const WorkingActivity&) = default;
};

WorkingActivity make_working(const Sdm& sdm, const Activity& activity,
                             const std::string& home_frame,
                             const std::set<std::string>& placed_frames,
                             const Lexicon& lexicon);

/// Builds the per-frame buckets from the primary placements, in frame order
/// and corpus order within a frame.
std::map<std::string, std::vector<WorkingActivity>> build_buckets(
    const Corpus& corpus, const std::vector<PhaseFrame>& frames,
    const Assignment& assignment, const Lexicon& lexicon);

struct BucketResult {
  std::vector<WorkingActivity> activities;
  MergeLog log;
};

/// Collapses synonym-connected name groups to their most complete member
/// (ties to the smallest source ref). Output has no synonymous pair left.
BucketResult unify(const std::vector<WorkingActivity>& bucket,
                   const Lexicon& lexicon, const OperatorConfig& cfg);

/// Merges affine pairs where one side is strictly more complete and the
/// weaker side contributes novel steps: steps append in source order,
/// artifacts and provenance union, the weaker source is consumed. Runs to a
/// fixpoint. Expects a unified bucket.
BucketResult supply(const std::vector<WorkingActivity>& bucket,
                    const Lexicon& lexicon, const OperatorConfig& cfg);

struct SplitChild {
  std::string name;
  std::vector<std::string> intent_terms;
  /// Inclusive 1-based [first, last] ranges into the parent's steps.
  std::vector<std::pair<int, int>> step_ranges;

  friend bool operator==(const SplitChild&, const SplitChild&) = default;
};

struct SplitRule {
  std::string match_name;
  std::vector<SplitChild> children;

  friend bool operator==(const SplitRule&, const SplitRule&) = default;
};

std::vector<SplitRule> load_split_rules(const std::filesystem::path& file);

struct SplitResult {
  std::vector<WorkingActivity> activities;
  MergeLog log;
  std::vector<SplitCandidate> candidates;
};

/// Replaces rule-matched activities by their rule children (first matching
/// rule wins) and flags oversize activities as split candidates without
/// altering them. Throws RuleError when a matched parent has fewer steps
/// than a rule range demands.
SplitResult apply_splits(const std::vector<WorkingActivity>& bucket,
                         const std::vector<SplitRule>& rules,
                         const Lexicon& lexicon, const OperatorConfig& cfg);

struct StageCluster {
  std::string id;
  std::string seed_id;
  std::vector<WorkingActivity> members;
  std::string name;
};

/// Groups activities into stage clusters. seed_star follows ascending
/// canonical id: the first unstaged activity seeds a cluster and every
/// remaining unstaged activity affine to the seed joins it. components mode
/// takes connected components of the affinity graph. Singletons stand alone.
std::vector<StageCluster> package_stages(const std::vector<WorkingActivity>& activities,
                                         const OperatorConfig& cfg);

/// Title-cased join of the top-k most frequent intent terms (ties broken
/// lexicographically); a singleton cluster keeps its member's name.
std::string name_stage(const StageCluster& cluster, const OperatorConfig& cfg);

struct EnrichmentEntry {
  std::string name;
  std::vector<std::string> techniques;
  std::string context;
  std::string problem;
  std::string consequences;

  friend bool operator==(const EnrichmentEntry&, const EnrichmentEntry&) = default;
};

std::vector<EnrichmentEntry> load_enrichment(const std::filesystem::path& file);

struct ConcretizeResult {
  PatternRecord stage;
  std::vector<PatternRecord> tasks;
  std::vector<std::string> matched_enrichment;
};

/// Turns one named cluster into a STAGE record plus its TASK records. Task
/// roles and artifacts are unions over the provenance sources; sibling tasks
/// cross-link each other; placements outside the owning frame become links
/// to that frame's PHASE record.
ConcretizeResult concretize_tasks(
    const StageCluster& cluster, const Corpus& corpus,
    const std::vector<EnrichmentEntry>& enrichment,
    const std::map<std::string, std::string>& phase_record_ids,
    const std::string& owning_frame, const Lexicon& lexicon,
    const OperatorConfig& cfg);

/// The frame that holds the plurality of the cluster members' placements
/// (ties to the earliest frame order).
std::string owning_frame_of(const StageCluster& cluster,
                            const std::vector<PhaseFrame>& frames);

struct MineOptions {
  FramesMode frames_mode = FramesMode::Sdlc;
  std::optional<std::filesystem::path> frames_file;
  std::vector<SplitRule> rules;
  std::vector<EnrichmentEntry> enrichment;
  /// CLI flag echo for run metadata; empty for API runs.
  std::map<std::string, std::string> flag_echo;
};

struct MineResult {
  PatternLibrary library;
  std::vector<PhaseFrame> frames;
  Assignment assignment;
  MergeLog merge_log;
  std::vector<SplitCandidate> split_candidates;
  std::vector<Diagnostic> warnings;
};

/// End-to-end extraction: frames, decomposition, per-frame unify/supply/
/// split, global stage packaging, task concretization, library assembly.
/// Expects a validated corpus.
MineResult mine(const Corpus& corpus, const Lexicon& lexicon,
                const OperatorConfig& cfg, const MineOptions& options = {});

}  // namespace patmine
