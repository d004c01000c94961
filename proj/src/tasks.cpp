#include <algorithm>
#include <map>

#include "json_util.hpp"
#include "patmine/pipeline.hpp"
#include "text_util.hpp"

namespace patmine {

std::vector<EnrichmentEntry> load_enrichment(const std::filesystem::path& file) {
  const detail::Json doc = detail::parse_json_file(file);
  if (!doc.is_object() || !doc.contains("entries") || !doc.at("entries").is_array()) {
    throw ParseError(file.string() + ": expected an object with an 'entries' array");
  }
  std::vector<EnrichmentEntry> entries;
  for (const detail::Json& j : doc.at("entries")) {
    EnrichmentEntry entry;
    entry.name = detail::require_string(j, "name", file.string());
    entry.techniques = detail::string_list(j, "techniques", file.string());
    entry.context = detail::optional_string(j, "context");
    entry.problem = detail::optional_string(j, "problem");
    entry.consequences = detail::optional_string(j, "consequences");
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string owning_frame_of(const StageCluster& cluster,
                            const std::vector<PhaseFrame>& frames) {
  std::map<std::string, int> votes;
  for (const WorkingActivity& member : cluster.members) {
    for (const std::string& frame_id : member.frames) ++votes[frame_id];
    if (member.frames.empty()) ++votes[member.home_frame];
  }
  const PhaseFrame* winner = nullptr;
  int best = -1;
  for (const PhaseFrame& frame : frames) {
    auto it = votes.find(frame.id);
    const int count = it != votes.end() ? it->second : 0;
    if (count > best) {  // earliest frame order wins ties
      best = count;
      winner = &frame;
    }
  }
  return winner != nullptr ? winner->id : std::string();
}

ConcretizeResult concretize_tasks(
    const StageCluster& cluster, const Corpus& corpus,
    const std::vector<EnrichmentEntry>& enrichment,
    const std::map<std::string, std::string>& phase_record_ids,
    const std::string& owning_frame, const Lexicon& lexicon,
    const OperatorConfig& cfg) {
  ConcretizeResult result;

  std::vector<PatternRecord> tasks;
  std::set<ActivityRef> stage_provenance;
  for (const WorkingActivity& member : cluster.members) {
    PatternRecord task;
    task.granularity = Granularity::Task;
    task.name = member.name;
    task.provenance = member.provenance;
    stage_provenance.insert(member.provenance.begin(), member.provenance.end());

    // Assigning-roles / assigning-work-product: union over the sources.
    for (const ActivityRef& ref : member.provenance) {
      const Activity* source = find_activity(corpus, ref);
      if (source == nullptr) continue;
      task.roles.insert(source->roles.begin(), source->roles.end());
      task.artifacts.insert(source->output_artifacts.begin(),
                            source->output_artifacts.end());
    }

    for (const Step& step : member.steps) task.body.push_back(step.description);

    for (const EnrichmentEntry& entry : enrichment) {
      if (!synonym(entry.name, member.name, lexicon, cfg).decision) continue;
      result.matched_enrichment.push_back(entry.name);
      for (const std::string& technique : entry.techniques) {
        task.body.push_back(technique);
      }
      if (task.context.empty()) task.context = entry.context;
      if (task.problem.empty()) task.problem = entry.problem;
      if (!entry.consequences.empty() && task.consequences == kUnexplored) {
        task.consequences = entry.consequences;
      }
    }

    task.id = pattern_id(task.granularity, task.name, task.provenance);

    // Frames beyond the owning one become phase links (straddlers and
    // members pulled into a stage owned elsewhere).
    for (const std::string& frame_id : member.frames) {
      if (frame_id == owning_frame) continue;
      auto it = phase_record_ids.find(frame_id);
      if (it != phase_record_ids.end()) task.related_patterns.insert(it->second);
    }

    tasks.push_back(std::move(task));
  }

  // Sibling cross-links.
  for (PatternRecord& task : tasks) {
    for (const PatternRecord& other : tasks) {
      if (other.id != task.id) task.related_patterns.insert(other.id);
    }
  }

  PatternRecord stage;
  stage.granularity = Granularity::Stage;
  stage.name = cluster.name;
  stage.provenance = std::move(stage_provenance);
  for (const PatternRecord& task : tasks) {
    stage.body.push_back(task.id);
    stage.roles.insert(task.roles.begin(), task.roles.end());
    stage.artifacts.insert(task.artifacts.begin(), task.artifacts.end());
  }
  stage.id = pattern_id(stage.granularity, stage.name, stage.provenance);

  result.stage = std::move(stage);
  result.tasks = std::move(tasks);
  return result;
}

}  // namespace patmine
