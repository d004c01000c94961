#include <algorithm>
#include <map>
#include <sstream>

#include "patmine/store.hpp"
#include "text_util.hpp"

namespace patmine {
namespace {

std::string join(const std::set<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (const std::string& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (const std::string& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string or_dash(const std::string& text) { return text.empty() ? "-" : text; }

std::string refs_text(const std::set<ActivityRef>& refs) {
  std::string out;
  for (const ActivityRef& ref : refs) {
    if (!out.empty()) out += ", ";
    out += ref.key();
  }
  return out;
}

std::string refs_text(const std::vector<ActivityRef>& refs) {
  std::string out;
  for (const ActivityRef& ref : refs) {
    if (!out.empty()) out += ", ";
    out += ref.key();
  }
  return out;
}

/// One card per record in the uniform formalism layout.
void render_card(std::ostringstream& out, const PatternRecord& record,
                 const PatternLibrary& library) {
  out << "### [" << to_string(record.granularity) << "] " << record.name << "\n\n";
  out << "- Id: `" << record.id << "`\n";
  out << "- Context: " << or_dash(record.context) << "\n";
  out << "- Problem: " << or_dash(record.problem) << "\n";
  if (record.granularity == Granularity::Task) {
    out << "- Process Pattern:\n";
    if (record.body.empty()) out << "  (no steps or techniques recorded)\n";
    int index = 1;
    for (const std::string& entry : record.body) {
      out << "  " << index++ << ". " << entry << "\n";
    }
  } else {
    out << "- Process Pattern: ";
    if (record.body.empty()) {
      out << "(no child patterns)\n";
    } else {
      std::string children;
      for (const std::string& child_id : record.body) {
        if (!children.empty()) children += ", ";
        const PatternRecord* child = library.find(child_id);
        children += child != nullptr ? child->name + " (`" + child_id + "`)"
                                     : "`" + child_id + "`";
      }
      out << children << "\n";
    }
  }
  out << "- Roles: " << or_dash(join(record.roles)) << "\n";
  out << "- Artifact: " << or_dash(join(record.artifacts)) << "\n";
  if (record.related_patterns.empty()) {
    out << "- Related Patterns: -\n";
  } else {
    out << "- Related Patterns: `" << join(record.related_patterns, "`, `") << "`\n";
  }
  out << "- Consequence: " << record.consequences << "\n";
  out << "- Provenance: " << or_dash(refs_text(record.provenance)) << "\n\n";
}

std::string cell_text(const std::vector<std::string>& names) {
  if (names.empty()) return kAbsentCell;
  std::string out;
  for (const std::string& name : names) {
    if (!out.empty()) out += "; ";
    out += name;
  }
  return out;
}

}  // namespace

std::string render_report(const PatternLibrary& library, const Corpus& corpus) {
  std::ostringstream out;
  const RunMetadata& meta = library.run_metadata;
  const RunAudit& audit = meta.audit;

  std::size_t phases = 0, stages = 0, tasks = 0;
  for (const PatternRecord& record : library.records) {
    switch (record.granularity) {
      case Granularity::Phase: ++phases; break;
      case Granularity::Stage: ++stages; break;
      case Granularity::Task: ++tasks; break;
    }
  }

  out << "# Process Pattern Report: " << library.domain_name << "\n\n";
  out << "Generated by " << meta.tool << ".\n\n";
  out << "## Summary\n\n";
  out << "- SDMs in corpus: " << corpus.sdms.size() << "\n";
  out << "- Source activities: " << corpus.total_activities() << "\n";
  out << "- Phase patterns: " << phases << "\n";
  out << "- Stage patterns: " << stages << "\n";
  out << "- Task patterns: " << tasks << "\n";
  out << "- Merge events: " << audit.merge_log.size() << "\n";
  out << "- Straddlers: " << audit.straddlers.size() << "\n";
  out << "- Unassigned activities: " << audit.unassigned.size() << "\n\n";

  out << "## Effective Configuration\n\n";
  out << "- tau_syn: " << detail::fmt_score(meta.config.tau_syn) << "\n";
  out << "- tau_aff: " << detail::fmt_score(meta.config.tau_aff) << "\n";
  out << "- epsilon_straddle: " << detail::fmt_score(meta.config.epsilon_straddle) << "\n";
  out << "- clustering_mode: " << to_string(meta.config.clustering_mode) << "\n";
  out << "- split_flag_threshold: " << meta.config.split_flag_threshold << "\n";
  out << "- stage_name_terms: " << meta.config.stage_name_terms << "\n";
  out << "- frames_mode: " << meta.frames_mode << "\n";
  out << "- frames: " << join(meta.frame_names) << "\n";
  out << "- lexicon_digest: " << meta.lexicon_digest << "\n";
  for (const auto& [flag, value] : meta.flags) {
    out << "- flag " << flag << ": " << value << "\n";
  }
  for (const std::string& note : meta.notes) {
    out << "- note: " << note << "\n";
  }
  out << "\n";

  out << "## Pattern Cards\n\n";
  for (const PatternRecord& record : library.records) {
    render_card(out, record, library);
  }

  out << "## Traceability Matrix\n\n";
  const TraceMatrix matrix = trace_matrix(library, corpus);
  if (matrix.task_ids.empty()) {
    out << "No task patterns extracted.\n\n";
  } else {
    out << "| SDM |";
    for (const std::string& name : matrix.task_names) out << " " << name << " |";
    out << "\n|---|";
    for (std::size_t i = 0; i < matrix.task_ids.size(); ++i) out << "---|";
    out << "\n";
    for (std::size_t row = 0; row < matrix.sdm_ids.size(); ++row) {
      out << "| " << matrix.sdm_ids[row] << " |";
      for (std::size_t col = 0; col < matrix.task_ids.size(); ++col) {
        out << " " << cell_text(matrix.cells[row][col]) << " |";
      }
      out << "\n";
    }
    out << "\n";
  }

  out << "## Frame Placements\n\n";
  if (audit.placements.empty()) {
    out << "No activities were placed.\n\n";
  } else {
    for (const PlacementRecord& p : audit.placements) {
      out << "- " << p.ref.key() << " -> " << join(p.frame_ids) << " (signal: "
          << p.signal << ")\n";
    }
    out << "\n";
  }

  out << "## Straddlers\n\n";
  if (audit.straddlers.empty()) {
    out << "No activity straddles more than one phase frame.\n\n";
  } else {
    for (const StraddleRecord& s : audit.straddlers) {
      out << "- " << s.ref.key() << " -> " << join(s.frame_ids) << "\n";
    }
    out << "\n";
  }

  out << "## Unassigned Activities\n\n";
  if (audit.unassigned.empty()) {
    out << "Every activity was assigned to a phase frame.\n\n";
  } else {
    for (const UnassignedRecord& u : audit.unassigned) {
      out << "- " << u.ref.key() << ": best frame '" << u.best_frame
          << "' (synonym " << detail::fmt_score(u.synonym_score) << ", affinity "
          << detail::fmt_score(u.affinity_score) << ")\n";
    }
    out << "\n";
  }

  out << "## Split Candidates\n\n";
  if (audit.split_candidates.empty()) {
    out << "No oversize activities flagged.\n\n";
  } else {
    for (const SplitCandidate& c : audit.split_candidates) {
      out << "- " << c.ref.key() << " '" << c.name << "' (" << c.step_count
          << " steps)\n";
    }
    out << "\n";
  }

  out << "## Merge Log\n\n";
  if (audit.merge_log.empty()) {
    out << "Zero merge events recorded.\n\n";
  } else {
    for (const MergeEvent& e : audit.merge_log) {
      out << "- " << to_string(e.kind) << " [" << e.frame_id << "] "
          << refs_text(e.inputs) << ": " << e.rule_or_score << "\n";
    }
    out << "\n";
  }

  if (!audit.warnings.empty()) {
    out << "## Warnings\n\n";
    for (const std::string& warning : audit.warnings) {
      out << "- " << warning << "\n";
    }
    out << "\n";
  }

  return out.str();
}

}  // namespace patmine
