#include "patmine/store.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"

namespace patmine {
namespace {

using detail::Json;

Json ref_to_json(const ActivityRef& ref) {
  return Json{{"sdm_id", ref.sdm_id}, {"activity_id", ref.activity_id}};
}

ActivityRef ref_from_json(const Json& j, const std::string& where) {
  return {detail::require_string(j, "sdm_id", where),
          detail::require_string(j, "activity_id", where)};
}

Json record_to_json(const PatternRecord& record) {
  Json j;
  j["id"] = record.id;
  j["granularity"] = to_string(record.granularity);
  j["name"] = record.name;
  j["context"] = record.context;
  j["problem"] = record.problem;
  j["body"] = record.body;
  j["roles"] = record.roles;
  j["artifacts"] = record.artifacts;
  j["related_patterns"] = record.related_patterns;
  j["consequences"] = record.consequences;
  Json provenance = Json::array();
  for (const ActivityRef& ref : record.provenance) provenance.push_back(ref_to_json(ref));
  j["provenance"] = std::move(provenance);
  return j;
}

const std::set<std::string>& known_record_fields() {
  static const std::set<std::string> fields = {
      "id",    "granularity", "name",        "context",          "problem",
      "body",  "roles",       "artifacts",   "related_patterns", "consequences",
      "provenance"};
  return fields;
}

PatternRecord record_from_json(const Json& j, std::vector<Diagnostic>& warnings) {
  PatternRecord record;
  record.id = detail::require_string(j, "id", "library record");
  const std::string where = "record '" + record.id + "'";
  record.granularity =
      granularity_from_string(detail::require_string(j, "granularity", where));
  record.name = detail::require_string(j, "name", where);
  record.context = detail::optional_string(j, "context");
  record.problem = detail::optional_string(j, "problem");
  for (const auto& s : detail::string_list(j, "body", where)) record.body.push_back(s);
  for (const auto& s : detail::string_list(j, "roles", where)) record.roles.insert(s);
  for (const auto& s : detail::string_list(j, "artifacts", where)) {
    record.artifacts.insert(s);
  }
  for (const auto& s : detail::string_list(j, "related_patterns", where)) {
    record.related_patterns.insert(s);
  }
  record.consequences = detail::optional_string(j, "consequences", kUnexplored);
  if (auto it = j.find("provenance"); it != j.end() && it->is_array()) {
    for (const Json& r : *it) record.provenance.insert(ref_from_json(r, where));
  }
  for (const auto& [key, value] : j.items()) {
    if (!known_record_fields().count(key)) {
      warnings.push_back({Severity::Warning, "", "",
                          where + ": unknown field '" + key + "' ignored"});
    }
  }
  return record;
}

Json audit_to_json(const RunAudit& audit) {
  Json j;
  Json placements = Json::array();
  for (const PlacementRecord& p : audit.placements) {
    Json item = ref_to_json(p.ref);
    item["frames"] = p.frame_ids;
    item["signal"] = p.signal;
    placements.push_back(std::move(item));
  }
  j["placements"] = std::move(placements);
  Json straddlers = Json::array();
  for (const StraddleRecord& s : audit.straddlers) {
    Json item = ref_to_json(s.ref);
    item["frames"] = s.frame_ids;
    straddlers.push_back(std::move(item));
  }
  j["straddlers"] = std::move(straddlers);
  Json unassigned = Json::array();
  for (const UnassignedRecord& u : audit.unassigned) {
    Json item = ref_to_json(u.ref);
    item["best_frame"] = u.best_frame;
    item["synonym_score"] = u.synonym_score;
    item["affinity_score"] = u.affinity_score;
    unassigned.push_back(std::move(item));
  }
  j["unassigned"] = std::move(unassigned);
  Json candidates = Json::array();
  for (const SplitCandidate& c : audit.split_candidates) {
    Json item = ref_to_json(c.ref);
    item["name"] = c.name;
    item["step_count"] = c.step_count;
    candidates.push_back(std::move(item));
  }
  j["split_candidates"] = std::move(candidates);
  Json merges = Json::array();
  for (const MergeEvent& e : audit.merge_log) {
    Json item;
    item["kind"] = to_string(e.kind);
    item["frame_id"] = e.frame_id;
    Json inputs = Json::array();
    for (const ActivityRef& ref : e.inputs) inputs.push_back(ref_to_json(ref));
    item["inputs"] = std::move(inputs);
    item["rule_or_score"] = e.rule_or_score;
    merges.push_back(std::move(item));
  }
  j["merge_log"] = std::move(merges);
  j["warnings"] = audit.warnings;
  return j;
}

RunAudit audit_from_json(const Json& j) {
  RunAudit audit;
  if (auto it = j.find("placements"); it != j.end() && it->is_array()) {
    for (const Json& p : *it) {
      PlacementRecord record;
      record.ref = ref_from_json(p, "audit placement");
      record.frame_ids = detail::string_list(p, "frames", "audit placement");
      record.signal = detail::optional_string(p, "signal");
      audit.placements.push_back(std::move(record));
    }
  }
  if (auto it = j.find("straddlers"); it != j.end() && it->is_array()) {
    for (const Json& s : *it) {
      StraddleRecord record;
      record.ref = ref_from_json(s, "audit straddler");
      record.frame_ids = detail::string_list(s, "frames", "audit straddler");
      audit.straddlers.push_back(std::move(record));
    }
  }
  if (auto it = j.find("unassigned"); it != j.end() && it->is_array()) {
    for (const Json& u : *it) {
      UnassignedRecord record;
      record.ref = ref_from_json(u, "audit unassigned");
      record.best_frame = detail::optional_string(u, "best_frame");
      record.synonym_score = u.value("synonym_score", 0.0);
      record.affinity_score = u.value("affinity_score", 0.0);
      audit.unassigned.push_back(std::move(record));
    }
  }
  if (auto it = j.find("split_candidates"); it != j.end() && it->is_array()) {
    for (const Json& c : *it) {
      SplitCandidate record;
      record.ref = ref_from_json(c, "audit split candidate");
      record.name = detail::optional_string(c, "name");
      record.step_count = c.value("step_count", std::size_t{0});
      audit.split_candidates.push_back(std::move(record));
    }
  }
  if (auto it = j.find("merge_log"); it != j.end() && it->is_array()) {
    for (const Json& e : *it) {
      MergeEvent event;
      event.kind =
          merge_kind_from_string(detail::require_string(e, "kind", "audit merge event"));
      event.frame_id = detail::optional_string(e, "frame_id");
      if (auto inputs = e.find("inputs"); inputs != e.end() && inputs->is_array()) {
        for (const Json& r : *inputs) {
          event.inputs.push_back(ref_from_json(r, "audit merge event"));
        }
      }
      event.rule_or_score = detail::optional_string(e, "rule_or_score");
      audit.merge_log.push_back(std::move(event));
    }
  }
  audit.warnings = detail::string_list(j, "warnings", "audit");
  return audit;
}

Json config_to_json(const OperatorConfig& cfg) {
  Json j;
  j["tau_syn"] = cfg.tau_syn;
  j["tau_aff"] = cfg.tau_aff;
  j["epsilon_straddle"] = cfg.epsilon_straddle;
  j["clustering_mode"] = to_string(cfg.clustering_mode);
  j["split_flag_threshold"] = cfg.split_flag_threshold;
  j["stage_name_terms"] = cfg.stage_name_terms;
  return j;
}

OperatorConfig config_from_json(const Json& j) {
  OperatorConfig cfg;
  cfg.tau_syn = j.value("tau_syn", cfg.tau_syn);
  cfg.tau_aff = j.value("tau_aff", cfg.tau_aff);
  cfg.epsilon_straddle = j.value("epsilon_straddle", cfg.epsilon_straddle);
  if (j.contains("clustering_mode")) {
    cfg.clustering_mode =
        clustering_mode_from_string(j.at("clustering_mode").get<std::string>());
  }
  cfg.split_flag_threshold = j.value("split_flag_threshold", cfg.split_flag_threshold);
  cfg.stage_name_terms = j.value("stage_name_terms", cfg.stage_name_terms);
  return cfg;
}

}  // namespace

OperatorConfig load_operator_config(const std::filesystem::path& file) {
  const Json doc = detail::parse_json_file(file);
  if (!doc.is_object()) {
    throw ParseError(file.string() + ": run configuration must be an object");
  }
  OperatorConfig cfg;
  try {
    cfg = config_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void save_library(const PatternLibrary& library, const std::filesystem::path& file) {
  const std::vector<Diagnostic> problems = validate_library(library);
  if (has_errors(problems)) {
    throw ValidationError("refusing to save invalid library:\n" +
                          error_summary(problems));
  }

  Json doc;
  doc["format"] = kLibraryFormat;
  doc["domain_name"] = library.domain_name;

  Json meta;
  meta["tool"] = library.run_metadata.tool;
  meta["config"] = config_to_json(library.run_metadata.config);
  meta["frames_mode"] = library.run_metadata.frames_mode;
  meta["frame_names"] = library.run_metadata.frame_names;
  meta["lexicon_digest"] = library.run_metadata.lexicon_digest;
  meta["flags"] = library.run_metadata.flags;
  meta["notes"] = library.run_metadata.notes;
  meta["audit"] = audit_to_json(library.run_metadata.audit);
  doc["run_metadata"] = std::move(meta);

  Json records = Json::array();
  for (const PatternRecord& record : library.records) {
    records.push_back(record_to_json(record));
  }
  doc["records"] = std::move(records);

  if (file.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(file.parent_path(), ec);
  }
  detail::write_text_file(file, doc.dump(2) + "\n");
}

LoadedLibrary load_library(const std::filesystem::path& file) {
  const Json doc = detail::parse_json_file(file);
  if (!doc.is_object()) {
    throw ParseError(file.string() + ": library document must be an object");
  }

  LoadedLibrary out;
  const std::string format = detail::optional_string(doc, "format");
  if (format != kLibraryFormat) {
    out.warnings.push_back({Severity::Warning, "", "",
                            "unexpected library format tag '" + format + "'"});
  }
  out.library.domain_name = detail::optional_string(doc, "domain_name");

  if (auto it = doc.find("run_metadata"); it != doc.end() && it->is_object()) {
    const Json& meta = *it;
    RunMetadata& m = out.library.run_metadata;
    m.tool = detail::optional_string(meta, "tool", m.tool);
    if (auto cfg = meta.find("config"); cfg != meta.end() && cfg->is_object()) {
      m.config = config_from_json(*cfg);
    }
    m.frames_mode = detail::optional_string(meta, "frames_mode", m.frames_mode);
    m.frame_names = detail::string_list(meta, "frame_names", "run_metadata");
    m.lexicon_digest = detail::optional_string(meta, "lexicon_digest");
    if (auto flags = meta.find("flags"); flags != meta.end() && flags->is_object()) {
      for (const auto& [key, value] : flags->items()) {
        if (value.is_string()) m.flags[key] = value.get<std::string>();
      }
    }
    m.notes = detail::string_list(meta, "notes", "run_metadata");
    if (auto audit = meta.find("audit"); audit != meta.end() && audit->is_object()) {
      m.audit = audit_from_json(*audit);
    }
  }

  const Json& records = detail::require_field(doc, "records", file.string());
  if (!records.is_array()) {
    throw ParseError(file.string() + ": records must be an array");
  }
  for (const Json& r : records) {
    out.library.records.push_back(record_from_json(r, out.warnings));
  }

  static const std::set<std::string> known_top = {"format", "domain_name",
                                                  "run_metadata", "records"};
  for (const auto& [key, value] : doc.items()) {
    if (!known_top.count(key)) {
      out.warnings.push_back({Severity::Warning, "", "",
                              "unknown top-level field '" + key + "' ignored"});
    }
  }

  const std::vector<Diagnostic> problems = validate_library(out.library);
  if (has_errors(problems)) {
    throw ValidationError(file.string() + ": invalid library:\n" +
                          error_summary(problems));
  }
  return out;
}

std::size_t TraceMatrix::filled_name_count() const {
  std::size_t count = 0;
  for (const auto& row : cells) {
    for (const auto& cell : row) count += cell.size();
  }
  return count;
}

TraceMatrix trace_matrix(const PatternLibrary& library, const Corpus& corpus) {
  TraceMatrix matrix;
  for (const Sdm& sdm : corpus.sdms) matrix.sdm_ids.push_back(sdm.id);

  std::vector<const PatternRecord*> tasks;
  for (const PatternRecord& record : library.records) {
    if (record.granularity == Granularity::Task) tasks.push_back(&record);
  }
  std::sort(tasks.begin(), tasks.end(),
            [](const PatternRecord* a, const PatternRecord* b) { return a->id < b->id; });

  for (const PatternRecord* task : tasks) {
    matrix.task_ids.push_back(task->id);
    matrix.task_names.push_back(task->name);
  }

  matrix.cells.assign(matrix.sdm_ids.size(),
                      std::vector<std::vector<std::string>>(tasks.size()));
  for (std::size_t col = 0; col < tasks.size(); ++col) {
    for (const ActivityRef& ref : tasks[col]->provenance) {
      auto row_it = std::find(matrix.sdm_ids.begin(), matrix.sdm_ids.end(), ref.sdm_id);
      if (row_it == matrix.sdm_ids.end()) continue;
      const std::size_t row = static_cast<std::size_t>(row_it - matrix.sdm_ids.begin());
      const Activity* activity = find_activity(corpus, ref);
      matrix.cells[row][col].push_back(activity != nullptr ? activity->name
                                                           : ref.activity_id + "?");
    }
  }
  return matrix;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out += "\"";
  return out;
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

std::string matrix_csv(const TraceMatrix& matrix) {
  std::string out = "sdm";
  for (const std::string& name : matrix.task_names) {
    out += "," + csv_escape(name);
  }
  out += "\n";
  for (std::size_t row = 0; row < matrix.sdm_ids.size(); ++row) {
    out += csv_escape(matrix.sdm_ids[row]);
    for (std::size_t col = 0; col < matrix.task_ids.size(); ++col) {
      out += "," + csv_escape(cell_text(matrix.cells[row][col]));
    }
    out += "\n";
  }
  return out;
}

std::vector<ActivityRef> dangling_provenance(const PatternLibrary& library,
                                             const Corpus& corpus) {
  std::set<ActivityRef> dangling;
  for (const PatternRecord& record : library.records) {
    for (const ActivityRef& ref : record.provenance) {
      if (record.granularity == Granularity::Phase) {
        // Phase provenance points at source phases, not activities.
        const Sdm* sdm = corpus.find_sdm(ref.sdm_id);
        if (sdm == nullptr || sdm->find_phase(ref.activity_id) == nullptr) {
          dangling.insert(ref);
        }
      } else if (find_activity(corpus, ref) == nullptr) {
        dangling.insert(ref);
      }
    }
  }
  return {dangling.begin(), dangling.end()};
}

}  // namespace patmine
