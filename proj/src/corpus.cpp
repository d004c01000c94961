#include "patmine/corpus.hpp"

#include <algorithm>
#include <set>

#include "json_util.hpp"

namespace patmine {
namespace {

using detail::Json;

Step parse_step(const Json& j, const std::string& where) {
  Step step;
  const Json& idx = detail::require_field(j, "index", where);
  if (!idx.is_number_integer()) {
    throw ParseError(where + ": step index must be an integer");
  }
  step.index = idx.get<int>();
  step.description = detail::require_string(j, "description", where);
  return step;
}

Activity parse_activity(const Json& j, const std::string& where) {
  Activity act;
  act.id = detail::require_string(j, "id", where);
  const std::string here = where + " activity '" + act.id + "'";
  act.name = detail::require_string(j, "name", here);
  act.phase_id = detail::require_string(j, "phase_id", here);
  for (const auto& t : detail::string_list(j, "intent_terms", here)) {
    act.intent_terms.push_back(t);
  }
  if (auto it = j.find("steps"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(here + ": steps must be an array");
    for (const Json& s : *it) act.steps.push_back(parse_step(s, here));
  }
  for (const auto& r : detail::string_list(j, "roles", here)) act.roles.insert(r);
  for (const auto& a : detail::string_list(j, "input_artifacts", here)) {
    act.input_artifacts.insert(a);
  }
  for (const auto& a : detail::string_list(j, "output_artifacts", here)) {
    act.output_artifacts.insert(a);
  }
  return act;
}

SdmPhase parse_phase(const Json& j, const std::string& where) {
  SdmPhase phase;
  phase.id = detail::require_string(j, "id", where);
  const std::string here = where + " phase '" + phase.id + "'";
  phase.name = detail::require_string(j, "name", here);
  phase.intent_terms = detail::string_list(j, "intent_terms", here);
  const Json& order = detail::require_field(j, "order", here);
  if (!order.is_number_integer()) {
    throw ParseError(here + ": order must be an integer");
  }
  phase.order = order.get<int>();
  return phase;
}

Sdm parse_sdm_doc(const Json& doc, const std::string& where) {
  if (!doc.is_object() || !doc.contains("sdm")) {
    throw ParseError(where + ": expected a top-level 'sdm' object");
  }
  const Json& j = doc.at("sdm");
  Sdm sdm;
  sdm.id = detail::require_string(j, "id", where);
  const std::string here = where + " sdm '" + sdm.id + "'";
  sdm.name = detail::require_string(j, "name", here);
  sdm.overview = detail::optional_string(j, "overview");
  if (auto it = j.find("phases"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(here + ": phases must be an array");
    for (const Json& p : *it) sdm.phases.push_back(parse_phase(p, here));
  }
  if (auto it = j.find("activities"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError(here + ": activities must be an array");
    for (const Json& a : *it) sdm.activities.push_back(parse_activity(a, here));
  }
  return sdm;
}

Json step_to_json(const Step& s) {
  return Json{{"index", s.index}, {"description", s.description}};
}

Json activity_to_json(const Activity& a) {
  Json j;
  j["id"] = a.id;
  j["name"] = a.name;
  j["phase_id"] = a.phase_id;
  j["intent_terms"] = a.intent_terms;
  Json steps = Json::array();
  for (const Step& s : a.steps) steps.push_back(step_to_json(s));
  j["steps"] = std::move(steps);
  j["roles"] = a.roles;
  j["input_artifacts"] = a.input_artifacts;
  j["output_artifacts"] = a.output_artifacts;
  return j;
}

Json sdm_to_json(const Sdm& sdm) {
  Json j;
  j["id"] = sdm.id;
  j["name"] = sdm.name;
  j["overview"] = sdm.overview;
  Json phases = Json::array();
  for (const SdmPhase& p : sdm.phases) {
    phases.push_back(Json{{"id", p.id},
                          {"name", p.name},
                          {"intent_terms", p.intent_terms},
                          {"order", p.order}});
  }
  j["phases"] = std::move(phases);
  Json activities = Json::array();
  for (const Activity& a : sdm.activities) activities.push_back(activity_to_json(a));
  j["activities"] = std::move(activities);
  return Json{{"sdm", std::move(j)}};
}

}  // namespace

std::string Diagnostic::to_string() const {
  std::string out = severity == Severity::Error ? "error: " : "warning: ";
  if (!sdm_id.empty()) {
    out += "sdm '" + sdm_id + "'";
    if (!activity_id.empty()) out += " activity '" + activity_id + "'";
    out += ": ";
  }
  out += message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(), [](const Diagnostic& d) {
    return d.severity == Severity::Error;
  });
}

std::string error_summary(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const Diagnostic& d : diagnostics) {
    if (d.severity != Severity::Error) continue;
    if (!out.empty()) out += "\n";
    out += d.to_string();
  }
  return out;
}

const SdmPhase* Sdm::find_phase(const std::string& phase_id) const {
  for (const SdmPhase& p : phases) {
    if (p.id == phase_id) return &p;
  }
  return nullptr;
}

const Sdm* Corpus::find_sdm(const std::string& sdm_id) const {
  for (const Sdm& s : sdms) {
    if (s.id == sdm_id) return &s;
  }
  return nullptr;
}

std::size_t Corpus::total_activities() const {
  std::size_t n = 0;
  for (const Sdm& s : sdms) n += s.activities.size();
  return n;
}

const Activity* find_activity(const Corpus& corpus, const ActivityRef& ref) {
  const Sdm* sdm = corpus.find_sdm(ref.sdm_id);
  if (sdm == nullptr) return nullptr;
  for (const Activity& a : sdm->activities) {
    if (a.id == ref.activity_id) return &a;
  }
  return nullptr;
}

Corpus parse_corpus(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw IoError("corpus directory not found: " + dir.string());
  }

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    if (entry.path().extension() != ".json") continue;
    files.push_back(entry.path());
  }
  // Directory enumeration order is not stable; filename order is the corpus
  // order contract.
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.filename().string() < b.filename().string();
  });

  Corpus corpus;
  corpus.domain_name = dir.filename().string();
  for (const auto& file : files) {
    if (file.filename() == "manifest.json") {
      const Json manifest = detail::parse_json_file(file);
      if (!manifest.is_object()) {
        throw ParseError(file.string() + ": manifest must be an object");
      }
      corpus.domain_name =
          detail::optional_string(manifest, "domain_name", corpus.domain_name);
      for (const auto& id :
           detail::string_list(manifest, "baseline_sdm_ids", file.string())) {
        corpus.baseline_sdm_ids.insert(id);
      }
      continue;
    }
    corpus.sdms.push_back(parse_sdm_doc(detail::parse_json_file(file), file.string()));
  }
  return corpus;
}

std::vector<Diagnostic> validate_corpus(const Corpus& corpus) {
  std::vector<Diagnostic> out;
  auto err = [&out](std::string sdm, std::string act, std::string msg) {
    out.push_back({Severity::Error, std::move(sdm), std::move(act), std::move(msg)});
  };

  if (corpus.sdms.empty()) {
    err("", "", "corpus contains no SDM documents");
  }

  std::set<std::string> sdm_ids;
  for (const Sdm& sdm : corpus.sdms) {
    if (sdm.id.empty()) {
      err("", "", "SDM with empty id");
      continue;
    }
    if (!sdm_ids.insert(sdm.id).second) {
      err(sdm.id, "", "duplicate SDM id '" + sdm.id + "'");
      continue;
    }

    std::set<std::string> phase_ids;
    int last_order = -1;
    bool order_reported = false;
    for (const SdmPhase& phase : sdm.phases) {
      if (!phase_ids.insert(phase.id).second) {
        err(sdm.id, "", "duplicate phase id '" + phase.id + "'");
      }
      if (phase.name.empty()) {
        err(sdm.id, "", "phase '" + phase.id + "' has an empty name");
      }
      if (phase.order <= last_order && !order_reported) {
        err(sdm.id, "",
            "phase '" + phase.id + "' breaks strictly increasing order values");
        order_reported = true;
      }
      last_order = phase.order;
    }

    std::set<std::string> activity_ids;
    for (const Activity& act : sdm.activities) {
      if (!activity_ids.insert(act.id).second) {
        err(sdm.id, act.id, "duplicate activity id '" + act.id + "'");
        continue;
      }
      if (act.name.empty()) {
        err(sdm.id, act.id, "activity has an empty name");
      }
      if (!phase_ids.count(act.phase_id)) {
        err(sdm.id, act.id,
            "activity references undeclared phase '" + act.phase_id + "'");
      }
      if (act.intent_terms.empty()) {
        err(sdm.id, act.id, "activity declares no intent terms");
      }
      int expected = 1;
      for (const Step& step : act.steps) {
        if (step.index != expected) {
          err(sdm.id, act.id,
              "step indices must be contiguous from 1 (found " +
                  std::to_string(step.index) + ", expected " +
                  std::to_string(expected) + ")");
          break;
        }
        if (step.description.empty()) {
          err(sdm.id, act.id,
              "step " + std::to_string(step.index) + " has an empty description");
        }
        ++expected;
      }
    }
  }

  for (const std::string& id : corpus.baseline_sdm_ids) {
    if (!sdm_ids.count(id)) {
      err("", "", "baseline SDM id '" + id + "' does not exist in the corpus");
    }
  }
  return out;
}

Corpus ingest_corpus(const std::filesystem::path& dir) {
  Corpus corpus = parse_corpus(dir);
  const std::vector<Diagnostic> diagnostics = validate_corpus(corpus);
  if (has_errors(diagnostics)) {
    throw ValidationError("corpus validation failed:\n" + error_summary(diagnostics));
  }
  return corpus;
}

void write_corpus(const Corpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create corpus directory: " + dir.string());
  }

  Json manifest;
  manifest["domain_name"] = corpus.domain_name;
  manifest["baseline_sdm_ids"] = corpus.baseline_sdm_ids;
  detail::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");

  int position = 1;
  for (const Sdm& sdm : corpus.sdms) {
    char prefix[8];
    std::snprintf(prefix, sizeof(prefix), "%02d_", position++);
    detail::write_text_file(dir / (prefix + sdm.id + ".json"),
                            sdm_to_json(sdm).dump(2) + "\n");
  }
}

}  // namespace patmine
