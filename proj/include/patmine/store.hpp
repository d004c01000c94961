#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "patmine/corpus.hpp"
#include "patmine/pattern.hpp"

namespace patmine {

/// Writes the library as one JSON interchange document. Refuses with
/// ValidationError when library invariants do not hold; the output is
/// byte-stable for identical content.
void save_library(const PatternLibrary& library, const std::filesystem::path& file);

struct LoadedLibrary {
  PatternLibrary library;
  /// Unknown-field and other forward-compatibility warnings.
  std::vector<Diagnostic> warnings;
};

/// Loads and re-validates a saved library. ValidationError on duplicate ids,
/// broken containment, or unresolvable references; unknown extra fields are
/// accepted with a warning.
LoadedLibrary load_library(const std::filesystem::path& file);

struct TraceMatrix {
  std::vector<std::string> sdm_ids;
  std::vector<std::string> task_ids;
  std::vector<std::string> task_names;
  /// cells[row][col] lists the source activity names of that SDM in that
  /// task's provenance; empty means absent.
  std::vector<std::vector<std::vector<std::string>>> cells;

  std::size_t filled_name_count() const;
};

/// Rows follow corpus order, columns sort by task pattern id.
TraceMatrix trace_matrix(const PatternLibrary& library, const Corpus& corpus);

/// CSV with a header row of task pattern names; absent cells carry "n.a".
std::string matrix_csv(const TraceMatrix& matrix);

/// Provenance refs in the library that the corpus cannot resolve.
std::vector<ActivityRef> dangling_provenance(const PatternLibrary& library,
                                             const Corpus& corpus);

/// Human-readable run report: pattern cards, trace matrix, straddlers,
/// unassigned activities, split candidates, merge log, effective config.
std::string render_report(const PatternLibrary& library, const Corpus& corpus);

}  // namespace patmine
