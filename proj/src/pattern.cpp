#include "patmine/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <string_view>

namespace patmine {
namespace {

uint64_t fnv1a(std::string_view data, uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

constexpr char kFieldSep = '\x1f';

}  // namespace

std::string to_string(Granularity g) {
  switch (g) {
    case Granularity::Phase: return "PHASE";
    case Granularity::Stage: return "STAGE";
    case Granularity::Task: return "TASK";
  }
  return "TASK";
}

Granularity granularity_from_string(const std::string& text) {
  if (text == "PHASE") return Granularity::Phase;
  if (text == "STAGE") return Granularity::Stage;
  if (text == "TASK") return Granularity::Task;
  throw ParseError("unknown granularity '" + text + "'");
}

std::string pattern_id(Granularity granularity, const std::string& name,
                       const std::set<ActivityRef>& provenance) {
  uint64_t h = 1469598103934665603ull;
  h = fnv1a(to_string(granularity), h);
  h = fnv1a(std::string_view(&kFieldSep, 1), h);
  h = fnv1a(name, h);
  for (const ActivityRef& ref : provenance) {  // std::set keeps refs sorted
    h = fnv1a(std::string_view(&kFieldSep, 1), h);
    h = fnv1a(ref.key(), h);
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  std::string prefix = to_string(granularity);
  std::transform(prefix.begin(), prefix.end(), prefix.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return prefix + "-" + buf;
}

const PatternRecord* PatternLibrary::find(const std::string& id) const {
  for (const PatternRecord& r : records) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<Diagnostic> validate_library(const PatternLibrary& library) {
  std::vector<Diagnostic> out;
  auto err = [&out](std::string msg) {
    out.push_back({Severity::Error, "", "", std::move(msg)});
  };

  std::map<std::string, const PatternRecord*> by_id;
  for (const PatternRecord& record : library.records) {
    if (record.id.empty()) {
      err("pattern '" + record.name + "' has an empty id");
      continue;
    }
    if (!by_id.emplace(record.id, &record).second) {
      err("duplicate pattern id '" + record.id + "'");
    }
  }
  if (has_errors(out)) return out;

  std::map<std::string, int> parent_count;
  for (const PatternRecord& record : library.records) {
    if (record.granularity == Granularity::Task) continue;
    const Granularity expected_child = record.granularity == Granularity::Phase
                                           ? Granularity::Stage
                                           : Granularity::Task;
    for (const std::string& child_id : record.body) {
      auto it = by_id.find(child_id);
      if (it == by_id.end()) {
        err(to_string(record.granularity) + " '" + record.id +
            "' lists unknown child '" + child_id + "'");
        continue;
      }
      if (it->second->granularity != expected_child) {
        err(to_string(record.granularity) + " '" + record.id + "' -> " +
            to_string(it->second->granularity) + " '" + child_id +
            "' is not a valid containment edge");
      }
      ++parent_count[child_id];
    }
  }

  for (const PatternRecord& record : library.records) {
    if (record.granularity == Granularity::Phase) continue;
    const int parents = parent_count.count(record.id) ? parent_count.at(record.id) : 0;
    if (parents != 1) {
      err(to_string(record.granularity) + " '" + record.id + "' has " +
          std::to_string(parents) + " parent(s); expected exactly 1");
    }
    if (record.provenance.empty()) {
      err(to_string(record.granularity) + " '" + record.id + "' has empty provenance");
    }
  }

  for (const PatternRecord& record : library.records) {
    if (record.related_patterns.count(record.id)) {
      err("pattern '" + record.id + "' relates to itself");
    }
    for (const std::string& rel : record.related_patterns) {
      if (!by_id.count(rel)) {
        err("pattern '" + record.id + "' relates to unknown pattern '" + rel + "'");
      }
    }
  }
  return out;
}

}  // namespace patmine
