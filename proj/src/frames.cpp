#include <algorithm>

#include "json_util.hpp"
#include "patmine/pipeline.hpp"
#include "text_util.hpp"

namespace patmine {
namespace {

struct BuiltinFrame {
  const char* name;
  std::vector<std::string> intent_terms;
};

// Generic life-cycle frames with intent vocabulary broad enough to catch
// activities whose phase names carry no signal.
const std::vector<BuiltinFrame>& sdlc_frames() {
  static const std::vector<BuiltinFrame> frames = {
      {"Initiate",
       {"initiate", "inception", "feasibility", "vision", "scope", "plan",
        "charter", "stakeholder"}},
      {"Analysis and Design",
       {"analysis", "design", "requirement", "architecture", "model",
        "specification"}},
      {"Construction",
       {"build", "construction", "implementation", "component", "integration"}},
      {"Test", {"test", "verification", "quality", "defect"}},
      {"Deployment", {"deploy", "production", "rollout", "training"}},
      {"Maintain", {"maintain", "monitor", "enhancement", "correction"}},
  };
  return frames;
}

std::string unique_frame_id(const std::string& name,
                            const std::vector<PhaseFrame>& existing) {
  std::string base = detail::slugify(name);
  if (base.empty()) base = "frame";
  std::string id = base;
  int suffix = 2;
  auto taken = [&existing](const std::string& candidate) {
    return std::any_of(existing.begin(), existing.end(),
                       [&candidate](const PhaseFrame& f) { return f.id == candidate; });
  };
  while (taken(id)) {
    id = base + "-" + std::to_string(suffix++);
  }
  return id;
}

std::vector<PhaseFrame> frames_from_file(const std::filesystem::path& file,
                                         const Lexicon& lexicon) {
  const detail::Json doc = detail::parse_json_file(file);
  if (!doc.is_object() || !doc.contains("frames") || !doc.at("frames").is_array()) {
    throw ConfigError(file.string() + ": expected an object with a 'frames' array");
  }
  std::vector<PhaseFrame> frames;
  for (const detail::Json& j : doc.at("frames")) {
    PhaseFrame frame;
    frame.name = detail::require_string(j, "name", file.string());
    frame.intent_terms =
        normalize_terms(detail::string_list(j, "intent_terms", file.string()), lexicon);
    if (frame.intent_terms.empty()) {
      throw ConfigError(file.string() + ": frame '" + frame.name +
                        "' has no usable intent terms");
    }
    const std::string declared = detail::optional_string(j, "id");
    frame.id = declared.empty() ? unique_frame_id(frame.name, frames) : declared;
    frame.order = static_cast<int>(frames.size());
    for (const PhaseFrame& other : frames) {
      if (other.name == frame.name) {
        throw ConfigError(file.string() + ": duplicate frame name '" + frame.name + "'");
      }
      if (other.id == frame.id) {
        throw ConfigError(file.string() + ": duplicate frame id '" + frame.id + "'");
      }
    }
    frames.push_back(std::move(frame));
  }
  if (frames.empty()) {
    throw ConfigError(file.string() + ": frames file lists no frames");
  }
  return frames;
}

std::vector<PhaseFrame> frames_from_baselines(const Corpus& corpus,
                                              const Lexicon& lexicon,
                                              const OperatorConfig& cfg) {
  if (corpus.baseline_sdm_ids.empty()) {
    throw ConfigError("derived frame mode requires baseline_sdm_ids in the corpus manifest");
  }
  std::vector<PhaseFrame> frames;
  for (const Sdm& sdm : corpus.sdms) {
    if (!corpus.baseline_sdm_ids.count(sdm.id)) continue;
    for (const SdmPhase& phase : sdm.phases) {
      TermSet intent = normalize_terms(phase.intent_terms, lexicon);
      {
        TermSet name_terms = normalize(phase.name, lexicon);
        intent.insert(name_terms.begin(), name_terms.end());
      }
      if (intent.empty()) {
        throw ConfigError("derived frame '" + phase.name + "' (sdm '" + sdm.id +
                          "') has no usable intent terms");
      }

      PhaseFrame* merged = nullptr;
      for (PhaseFrame& existing : frames) {
        if (synonym(existing.name, phase.name, lexicon, cfg).decision) {
          merged = &existing;
          break;
        }
      }
      if (merged != nullptr) {
        // Keep the earlier name, widen the intent.
        merged->intent_terms.insert(intent.begin(), intent.end());
        merged->provenance.insert({sdm.id, phase.id});
      } else {
        PhaseFrame frame;
        frame.name = phase.name;
        frame.intent_terms = std::move(intent);
        frame.id = unique_frame_id(phase.name, frames);
        frame.order = static_cast<int>(frames.size());
        frame.provenance.insert({sdm.id, phase.id});
        frames.push_back(std::move(frame));
      }
    }
  }
  if (frames.empty()) {
    throw ConfigError("derived frame mode found no phases in the baseline SDMs");
  }
  return frames;
}

}  // namespace

std::string to_string(FramesMode mode) {
  switch (mode) {
    case FramesMode::Sdlc: return "sdlc";
    case FramesMode::Derived: return "derived";
    case FramesMode::File: return "file";
  }
  return "sdlc";
}

FramesMode frames_mode_from_string(const std::string& text) {
  if (text == "sdlc") return FramesMode::Sdlc;
  if (text == "derived") return FramesMode::Derived;
  if (text == "file") return FramesMode::File;
  throw ConfigError("unknown frames mode '" + text + "' (expected sdlc, derived or file)");
}

std::vector<PhaseFrame> determine_phase_frames(
    const Corpus& corpus, FramesMode mode, const Lexicon& lexicon,
    const OperatorConfig& cfg,
    const std::optional<std::filesystem::path>& frames_file) {
  switch (mode) {
    case FramesMode::Sdlc: {
      std::vector<PhaseFrame> frames;
      for (const BuiltinFrame& builtin : sdlc_frames()) {
        PhaseFrame frame;
        frame.name = builtin.name;
        frame.id = detail::slugify(builtin.name);
        frame.intent_terms = normalize_terms(builtin.intent_terms, lexicon);
        frame.order = static_cast<int>(frames.size());
        frames.push_back(std::move(frame));
      }
      return frames;
    }
    case FramesMode::Derived:
      return frames_from_baselines(corpus, lexicon, cfg);
    case FramesMode::File:
      if (!frames_file.has_value()) {
        throw ConfigError("file frame mode requires a frames file");
      }
      return frames_from_file(*frames_file, lexicon);
  }
  throw ConfigError("unhandled frames mode");
}

}  // namespace patmine
