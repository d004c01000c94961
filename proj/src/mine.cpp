#include <iterator>
#include <map>

#include "patmine/pipeline.hpp"

namespace patmine {
namespace {

PatternRecord make_phase_record(const PhaseFrame& frame) {
  PatternRecord record;
  record.granularity = Granularity::Phase;
  record.name = frame.name;
  record.provenance = frame.provenance;
  record.id = pattern_id(record.granularity, record.name, record.provenance);
  return record;
}

}  // namespace

MineResult mine(const Corpus& corpus, const Lexicon& lexicon,
                const OperatorConfig& cfg, const MineOptions& options) {
  cfg.validate();

  MineResult result;
  result.frames =
      determine_phase_frames(corpus, options.frames_mode, lexicon, cfg, options.frames_file);
  result.assignment = decompose(corpus, result.frames, lexicon, cfg);

  // Sieve each frame's bucket, then pool the survivors for global packaging.
  auto buckets = build_buckets(corpus, result.frames, result.assignment, lexicon);
  std::vector<WorkingActivity> pooled;
  for (const PhaseFrame& frame : result.frames) {
    BucketResult unified = unify(buckets[frame.id], lexicon, cfg);
    result.merge_log.insert(result.merge_log.end(), unified.log.begin(),
                            unified.log.end());
    BucketResult supplied = supply(unified.activities, lexicon, cfg);
    result.merge_log.insert(result.merge_log.end(), supplied.log.begin(),
                            supplied.log.end());
    SplitResult split = apply_splits(supplied.activities, options.rules, lexicon, cfg);
    result.merge_log.insert(result.merge_log.end(), split.log.begin(), split.log.end());
    result.split_candidates.insert(result.split_candidates.end(),
                                   split.candidates.begin(), split.candidates.end());
    pooled.insert(pooled.end(), split.activities.begin(), split.activities.end());
  }

  const std::vector<StageCluster> clusters = package_stages(pooled, cfg);

  PatternLibrary& library = result.library;
  library.domain_name = corpus.domain_name;

  std::map<std::string, std::string> phase_record_ids;
  std::map<std::string, std::size_t> phase_record_pos;
  for (const PhaseFrame& frame : result.frames) {
    PatternRecord record = make_phase_record(frame);
    phase_record_ids[frame.id] = record.id;
    phase_record_pos[frame.id] = library.records.size();
    library.records.push_back(std::move(record));
  }

  std::vector<PatternRecord> stages;
  std::vector<PatternRecord> tasks;
  std::set<std::string> matched_enrichment;
  for (const StageCluster& cluster : clusters) {
    const std::string owner = owning_frame_of(cluster, result.frames);
    ConcretizeResult concrete = concretize_tasks(
        cluster, corpus, options.enrichment, phase_record_ids, owner, lexicon, cfg);
    for (const std::string& name : concrete.matched_enrichment) {
      matched_enrichment.insert(name);
    }

    PatternRecord& phase = library.records[phase_record_pos.at(owner)];
    phase.body.push_back(concrete.stage.id);
    phase.roles.insert(concrete.stage.roles.begin(), concrete.stage.roles.end());
    phase.artifacts.insert(concrete.stage.artifacts.begin(),
                           concrete.stage.artifacts.end());

    // Reciprocal links for tasks reachable from a non-owning frame.
    for (const PatternRecord& task : concrete.tasks) {
      for (const std::string& related : task.related_patterns) {
        for (auto& [frame_id, record_id] : phase_record_ids) {
          if (record_id != related) continue;
          library.records[phase_record_pos.at(frame_id)].related_patterns.insert(
              task.id);
        }
      }
    }

    stages.push_back(std::move(concrete.stage));
    tasks.insert(tasks.end(), std::make_move_iterator(concrete.tasks.begin()),
                 std::make_move_iterator(concrete.tasks.end()));
  }
  for (PatternRecord& stage : stages) library.records.push_back(std::move(stage));
  for (PatternRecord& task : tasks) library.records.push_back(std::move(task));

  for (const EnrichmentEntry& entry : options.enrichment) {
    if (!matched_enrichment.count(entry.name)) {
      result.warnings.push_back({Severity::Warning, "", "",
                                 "enrichment entry '" + entry.name +
                                     "' matched no task pattern"});
    }
  }

  RunMetadata& meta = library.run_metadata;
  meta.config = cfg;
  meta.frames_mode = to_string(options.frames_mode);
  for (const PhaseFrame& frame : result.frames) meta.frame_names.push_back(frame.name);
  meta.lexicon_digest = lexicon.digest();
  meta.flags = options.flag_echo;
  meta.notes = {
      "placement: an activity joins the frame with the best of phase-name synonym "
      "and intent affinity; the firing signal is recorded per activity",
      "unify: synonym-connected activities collapse to their most complete "
      "representative with provenance retained",
  };

  RunAudit& audit = meta.audit;
  for (const auto& [ref, frame_ids] : result.assignment.placements) {
    PlacementRecord placement;
    placement.ref = ref;
    placement.frame_ids.assign(frame_ids.begin(), frame_ids.end());
    auto signal = result.assignment.signals.find(ref);
    placement.signal = signal != result.assignment.signals.end() ? signal->second : "";
    audit.placements.push_back(std::move(placement));
  }
  for (const ActivityRef& ref : result.assignment.straddlers) {
    StraddleRecord s;
    s.ref = ref;
    const auto& placed = result.assignment.placements.at(ref);
    s.frame_ids.assign(placed.begin(), placed.end());
    audit.straddlers.push_back(std::move(s));
  }
  audit.unassigned = result.assignment.unassigned;
  audit.split_candidates = result.split_candidates;
  audit.merge_log = result.merge_log;
  for (const Diagnostic& warning : result.warnings) {
    audit.warnings.push_back(warning.message);
  }

  return result;
}

}  // namespace patmine
