#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "json_util.hpp"
#include "patmine/pipeline.hpp"
#include "text_util.hpp"

namespace patmine {
namespace {

std::string join_names(const std::vector<const WorkingActivity*>& members) {
  std::string out;
  for (const WorkingActivity* m : members) {
    if (!out.empty()) out += " | ";
    out += m->name;
  }
  return out;
}

/// Strict-weak order placing the most complete member first; ties fall back
/// to the smallest source ref so representative selection is deterministic.
bool representative_before(const WorkingActivity& a, const WorkingActivity& b) {
  switch (more_complete(a, b)) {
    case Completeness::FirstMore: return true;
    case Completeness::SecondMore: return false;
    case Completeness::Equal: break;
  }
  return *a.provenance.begin() < *b.provenance.begin();
}

void reindex_steps(std::vector<Step>& steps) {
  int index = 1;
  for (Step& step : steps) step.index = index++;
}

}  // namespace

std::string to_string(MergeKind kind) {
  switch (kind) {
    case MergeKind::Unify: return "UNIFY";
    case MergeKind::Supply: return "SUPPLY";
    case MergeKind::Split: return "SPLIT";
  }
  return "UNIFY";
}

MergeKind merge_kind_from_string(const std::string& text) {
  if (text == "UNIFY") return MergeKind::Unify;
  if (text == "SUPPLY") return MergeKind::Supply;
  if (text == "SPLIT") return MergeKind::Split;
  throw ParseError("unknown merge kind '" + text + "'");
}

WorkingActivity make_working(const Sdm& sdm, const Activity& activity,
                             const std::string& home_frame,
                             const std::set<std::string>& placed_frames,
                             const Lexicon& lexicon) {
  WorkingActivity w;
  w.canonical_id = sdm.id + ":" + activity.id;
  w.name = activity.name;
  w.intent = normalize_terms(activity.intent_terms, lexicon);
  w.steps = activity.steps;
  w.roles = activity.roles;
  w.input_artifacts = activity.input_artifacts;
  w.output_artifacts = activity.output_artifacts;
  w.provenance.insert({sdm.id, activity.id});
  w.frames = placed_frames;
  w.home_frame = home_frame;
  return w;
}

std::map<std::string, std::vector<WorkingActivity>> build_buckets(
    const Corpus& corpus, const std::vector<PhaseFrame>& frames,
    const Assignment& assignment, const Lexicon& lexicon) {
  std::map<std::string, std::vector<WorkingActivity>> buckets;
  for (const PhaseFrame& frame : frames) buckets[frame.id];

  for (const Sdm& sdm : corpus.sdms) {
    for (const Activity& activity : sdm.activities) {
      const ActivityRef ref{sdm.id, activity.id};
      auto primary = assignment.primary.find(ref);
      if (primary == assignment.primary.end()) continue;
      auto placements = assignment.placements.find(ref);
      buckets[primary->second].push_back(make_working(
          sdm, activity, primary->second,
          placements != assignment.placements.end() ? placements->second
                                                    : std::set<std::string>{},
          lexicon));
    }
  }
  return buckets;
}

BucketResult unify(const std::vector<WorkingActivity>& bucket,
                   const Lexicon& lexicon, const OperatorConfig& cfg) {
  BucketResult result;
  const std::size_t n = bucket.size();
  if (n == 0) return result;

  // Connected components of the pairwise name-synonym relation.
  std::vector<std::size_t> component(n);
  std::iota(component.begin(), component.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    while (component[i] != i) {
      component[i] = component[component[i]];
      i = component[i];
    }
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (synonym(bucket[i].name, bucket[j].name, lexicon, cfg).decision) {
        component[root(i)] = root(j);
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) classes[root(i)].push_back(i);

  // Emit in order of each class's first bucket occurrence.
  std::vector<std::vector<std::size_t>> ordered;
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<std::size_t>& members = classes[root(i)];
    if (members.front() == i) ordered.push_back(members);
  }

  for (const std::vector<std::size_t>& members : ordered) {
    if (members.size() == 1) {
      result.activities.push_back(bucket[members.front()]);
      continue;
    }
    std::vector<const WorkingActivity*> group;
    for (std::size_t idx : members) group.push_back(&bucket[idx]);
    std::sort(group.begin(), group.end(),
              [](const WorkingActivity* a, const WorkingActivity* b) {
                return representative_before(*a, *b);
              });

    WorkingActivity merged = *group.front();
    MergeEvent event;
    event.kind = MergeKind::Unify;
    event.frame_id = merged.home_frame;
    for (const WorkingActivity* m : group) {
      event.inputs.insert(event.inputs.end(), m->provenance.begin(),
                          m->provenance.end());
      merged.provenance.insert(m->provenance.begin(), m->provenance.end());
      merged.frames.insert(m->frames.begin(), m->frames.end());
      for (const MergeEvent& h : m->merge_history) {
        if (m != group.front()) merged.merge_history.push_back(h);
      }
    }
    std::sort(event.inputs.begin(), event.inputs.end());
    event.rule_or_score =
        "representative '" + merged.name + "' of: " + join_names(group);
    merged.merge_history.push_back(event);
    result.log.push_back(std::move(event));
    result.activities.push_back(std::move(merged));
  }
  return result;
}

BucketResult supply(const std::vector<WorkingActivity>& bucket,
                    const Lexicon& lexicon, const OperatorConfig& cfg) {
  BucketResult result;
  result.activities = bucket;
  std::sort(result.activities.begin(), result.activities.end(),
            [](const WorkingActivity& a, const WorkingActivity& b) {
              return a.canonical_id < b.canonical_id;
            });

  bool changed = true;
  while (changed) {
    changed = false;
    auto& acts = result.activities;
    for (std::size_t i = 0; i < acts.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < acts.size() && !changed; ++j) {
        WorkingActivity& a = acts[i];
        WorkingActivity& b = acts[j];
        if (synonym(a.name, b.name, lexicon, cfg).decision) continue;
        const OpResult affinity = semantic_affinity(a.intent, b.intent, cfg);
        if (!affinity.decision) continue;

        const Completeness order = more_complete(a, b);
        if (order == Completeness::Equal) continue;
        WorkingActivity& complete = order == Completeness::FirstMore ? a : b;
        WorkingActivity& partial = order == Completeness::FirstMore ? b : a;

        std::set<std::string> known;
        for (const Step& s : complete.steps) known.insert(s.description);
        std::vector<Step> novel;
        for (const Step& s : partial.steps) {
          if (!known.count(s.description)) novel.push_back(s);
        }
        // Nothing new to contribute: the pair stays separate.
        if (novel.empty()) continue;

        MergeEvent event;
        event.kind = MergeKind::Supply;
        event.frame_id = complete.home_frame;
        event.inputs.insert(event.inputs.end(), complete.provenance.begin(),
                            complete.provenance.end());
        event.inputs.insert(event.inputs.end(), partial.provenance.begin(),
                            partial.provenance.end());
        std::sort(event.inputs.begin(), event.inputs.end());
        event.rule_or_score = "affinity " + detail::fmt_score(affinity.score) +
                              "; '" + complete.name + "' absorbed " +
                              std::to_string(novel.size()) + " step(s) from '" +
                              partial.name + "'";

        complete.steps.insert(complete.steps.end(), novel.begin(), novel.end());
        reindex_steps(complete.steps);
        complete.input_artifacts.insert(partial.input_artifacts.begin(),
                                        partial.input_artifacts.end());
        complete.output_artifacts.insert(partial.output_artifacts.begin(),
                                         partial.output_artifacts.end());
        complete.provenance.insert(partial.provenance.begin(),
                                   partial.provenance.end());
        complete.frames.insert(partial.frames.begin(), partial.frames.end());
        for (const MergeEvent& h : partial.merge_history) {
          complete.merge_history.push_back(h);
        }
        complete.merge_history.push_back(event);
        result.log.push_back(std::move(event));

        acts.erase(acts.begin() +
                   static_cast<std::ptrdiff_t>(&partial == &a ? i : j));
        changed = true;
      }
    }
  }
  return result;
}

std::vector<SplitRule> load_split_rules(const std::filesystem::path& file) {
  const detail::Json doc = detail::parse_json_file(file);
  if (!doc.is_object() || !doc.contains("rules") || !doc.at("rules").is_array()) {
    throw ParseError(file.string() + ": expected an object with a 'rules' array");
  }
  std::vector<SplitRule> rules;
  for (const detail::Json& j : doc.at("rules")) {
    SplitRule rule;
    rule.match_name = detail::require_string(j, "match_name", file.string());
    const std::string where = file.string() + " rule '" + rule.match_name + "'";
    const detail::Json& children = detail::require_field(j, "children", where);
    if (!children.is_array()) {
      throw ParseError(where + ": children must be an array");
    }
    std::set<std::string> seen_names;
    for (const detail::Json& c : children) {
      SplitChild child;
      child.name = detail::require_string(c, "name", where);
      if (!seen_names.insert(child.name).second) {
        throw ValidationError(where + ": duplicate child name '" + child.name + "'");
      }
      child.intent_terms = detail::string_list(c, "intent_terms", where);
      const detail::Json& ranges = detail::require_field(c, "steps", where);
      if (!ranges.is_array()) {
        throw ParseError(where + ": child steps must be an array of [first,last] pairs");
      }
      for (const detail::Json& r : ranges) {
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() ||
            !r[1].is_number_integer()) {
          throw ParseError(where + ": child steps must be an array of [first,last] pairs");
        }
        const int first = r[0].get<int>();
        const int last = r[1].get<int>();
        if (first < 1 || last < first) {
          throw ValidationError(where + ": invalid step range [" +
                                std::to_string(first) + "," + std::to_string(last) + "]");
        }
        child.step_ranges.emplace_back(first, last);
      }
      rule.children.push_back(std::move(child));
    }
    if (rule.children.size() < 2) {
      throw ValidationError(where + ": a split rule needs at least two children");
    }
    // Ranges must be disjoint across the whole rule.
    std::set<int> claimed;
    for (const SplitChild& child : rule.children) {
      for (const auto& [first, last] : child.step_ranges) {
        for (int s = first; s <= last; ++s) {
          if (!claimed.insert(s).second) {
            throw ValidationError(where + ": step " + std::to_string(s) +
                                  " claimed by two children");
          }
        }
      }
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

SplitResult apply_splits(const std::vector<WorkingActivity>& bucket,
                         const std::vector<SplitRule>& rules,
                         const Lexicon& lexicon, const OperatorConfig& cfg) {
  SplitResult result;
  for (const WorkingActivity& activity : bucket) {
    const SplitRule* matched = nullptr;
    for (const SplitRule& rule : rules) {
      if (synonym(rule.match_name, activity.name, lexicon, cfg).decision) {
        matched = &rule;
        break;
      }
    }

    if (matched == nullptr) {
      if (activity.steps.size() > static_cast<std::size_t>(cfg.split_flag_threshold)) {
        result.candidates.push_back({*activity.provenance.begin(), activity.name,
                                     activity.steps.size()});
      }
      result.activities.push_back(activity);
      continue;
    }

    MergeEvent event;
    event.kind = MergeKind::Split;
    event.frame_id = activity.home_frame;
    event.inputs.insert(event.inputs.end(), activity.provenance.begin(),
                        activity.provenance.end());
    std::sort(event.inputs.begin(), event.inputs.end());
    event.rule_or_score = "rule '" + matched->match_name + "' split '" +
                          activity.name + "' into " +
                          std::to_string(matched->children.size()) + " children";

    int child_index = 1;
    for (const SplitChild& spec : matched->children) {
      WorkingActivity child;
      char suffix[8];
      std::snprintf(suffix, sizeof(suffix), "#%02d", child_index++);
      child.canonical_id = activity.canonical_id + suffix;
      child.name = spec.name;
      child.intent = normalize_terms(spec.intent_terms, lexicon);
      for (const auto& [first, last] : spec.step_ranges) {
        if (static_cast<std::size_t>(last) > activity.steps.size()) {
          throw RuleError("split rule '" + matched->match_name + "': step range [" +
                          std::to_string(first) + "," + std::to_string(last) +
                          "] exceeds the " + std::to_string(activity.steps.size()) +
                          " step(s) of '" + activity.name + "'");
        }
        for (int s = first; s <= last; ++s) {
          child.steps.push_back(activity.steps[static_cast<std::size_t>(s - 1)]);
        }
      }
      reindex_steps(child.steps);
      child.roles = activity.roles;
      child.input_artifacts = activity.input_artifacts;
      child.output_artifacts = activity.output_artifacts;
      child.provenance = activity.provenance;
      child.frames = activity.frames;
      child.home_frame = activity.home_frame;
      child.merge_history = activity.merge_history;
      child.merge_history.push_back(event);
      result.activities.push_back(std::move(child));
    }
    result.log.push_back(std::move(event));
  }
  return result;
}

}  // namespace patmine
