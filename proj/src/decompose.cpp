#include <algorithm>

#include "patmine/pipeline.hpp"
#include "text_util.hpp"

namespace patmine {

Assignment decompose(const Corpus& corpus, const std::vector<PhaseFrame>& frames,
                     const Lexicon& lexicon, const OperatorConfig& cfg) {
  if (frames.empty()) {
    throw ConfigError("decompose requires at least one phase frame");
  }

  Assignment assignment;
  for (const Sdm& sdm : corpus.sdms) {
    for (const Activity& activity : sdm.activities) {
      const ActivityRef ref{sdm.id, activity.id};
      const SdmPhase* phase = sdm.find_phase(activity.phase_id);
      const std::string phase_name = phase != nullptr ? phase->name : std::string();
      const TermSet intent = normalize_terms(activity.intent_terms, lexicon);

      std::vector<PlacementScore> scores;
      scores.reserve(frames.size());
      for (const PhaseFrame& frame : frames) {
        PlacementScore score;
        score.frame_id = frame.id;
        score.synonym_score = synonym(phase_name, frame.name, lexicon, cfg).score;
        score.affinity_score = semantic_affinity(intent, frame.intent_terms, cfg).score;
        scores.push_back(score);
      }

      // Best evidence across frames; frame order breaks exact ties.
      const PlacementScore* best = &scores.front();
      for (const PlacementScore& s : scores) {
        if (s.best() > best->best()) best = &s;
      }

      // Unassigned only when the best score clears neither threshold.
      const bool passes = best->best() >= std::min(cfg.tau_syn, cfg.tau_aff);
      if (!passes) {
        assignment.unassigned.push_back(
            {ref, best->frame_id, best->synonym_score, best->affinity_score});
        continue;
      }

      std::set<std::string> placed;
      for (const PlacementScore& s : scores) {
        if (s.best() >= best->best() - cfg.epsilon_straddle) {
          placed.insert(s.frame_id);
        }
      }
      assignment.primary[ref] = best->frame_id;
      if (placed.size() > 1) {
        assignment.straddlers.push_back(ref);
      }

      std::string signal;
      const bool syn_fired = best->synonym_score >= cfg.tau_syn;
      const bool aff_fired = best->affinity_score >= cfg.tau_aff;
      if (syn_fired && aff_fired) {
        signal = "synonym+affinity";
      } else if (syn_fired) {
        signal = "synonym";
      } else if (aff_fired) {
        signal = "affinity";
      } else {
        signal = "score-only";
      }
      assignment.signals[ref] = signal;
      assignment.placements[ref] = std::move(placed);
    }
  }
  return assignment;
}

}  // namespace patmine
