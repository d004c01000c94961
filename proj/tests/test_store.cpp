#include <doctest.h>

#include <json.hpp>

#include "patmine/pipeline.hpp"
#include "patmine/store.hpp"
#include "test_util.hpp"

using namespace patmine;

namespace {

MineResult mine_fixture(const std::string& name) {
  const Corpus corpus = ingest_corpus(testutil::fixture(name));
  return mine(corpus, starter_lexicon(), OperatorConfig{});
}

}  // namespace

TEST_CASE("a saved library loads back structurally equal") {
  const MineResult result = mine_fixture("re_corpus");
  const auto dir = testutil::scratch_dir("roundtrip");
  save_library(result.library, dir / "library.json");
  const LoadedLibrary loaded = load_library(dir / "library.json");
  CHECK(loaded.library == result.library);
  CHECK(loaded.warnings.empty());
}

TEST_CASE("saving twice produces byte-identical files") {
  const MineResult result = mine_fixture("re_corpus");
  const auto dir = testutil::scratch_dir("determinism");
  save_library(result.library, dir / "one.json");
  save_library(result.library, dir / "two.json");
  CHECK(testutil::read_file(dir / "one.json") == testutil::read_file(dir / "two.json"));
}

TEST_CASE("a library violating containment is refused with the edge named") {
  MineResult result = mine_fixture("re_corpus");
  PatternLibrary broken = result.library;
  std::string task_id;
  for (PatternRecord& record : broken.records) {
    if (record.granularity == Granularity::Task) task_id = record.id;
  }
  for (PatternRecord& record : broken.records) {
    if (record.granularity == Granularity::Phase && !record.body.empty()) {
      record.body[0] = task_id;  // phase -> task is not a legal edge
    }
  }
  const auto dir = testutil::scratch_dir("refusal");
  CHECK_THROWS_WITH_AS(save_library(broken, dir / "broken.json"),
                       doctest::Contains(task_id.c_str()), ValidationError);
}

TEST_CASE("renaming changes a pattern's id, unrelated reordering does not") {
  const std::set<ActivityRef> provenance = {{"m1", "a1"}, {"m2", "a2"}};
  const std::string original = pattern_id(Granularity::Task, "Asset Analysis", provenance);
  CHECK(original == pattern_id(Granularity::Task, "Asset Analysis", provenance));
  CHECK(original != pattern_id(Granularity::Task, "Asset Review", provenance));
  CHECK(original != pattern_id(Granularity::Stage, "Asset Analysis", provenance));
  CHECK(original !=
        pattern_id(Granularity::Task, "Asset Analysis", {{"m1", "a1"}}));
}

TEST_CASE("loading rejects duplicated ids and warns on unknown fields") {
  const MineResult result = mine_fixture("re_corpus");
  const auto dir = testutil::scratch_dir("tamper");
  save_library(result.library, dir / "library.json");

  SUBCASE("duplicate record id") {
    auto doc = nlohmann::ordered_json::parse(testutil::read_file(dir / "library.json"));
    doc["records"].push_back(doc["records"].back());
    testutil::write_file(dir / "dup.json", doc.dump(2));
    const std::string dup_id = doc["records"].back()["id"].get<std::string>();
    CHECK_THROWS_WITH_AS(load_library(dir / "dup.json"),
                         doctest::Contains(dup_id.c_str()), ValidationError);
  }

  SUBCASE("unknown extra field is accepted with a warning") {
    auto doc = nlohmann::ordered_json::parse(testutil::read_file(dir / "library.json"));
    doc["records"][0]["custom_annotation"] = "kept for later";
    testutil::write_file(dir / "extra.json", doc.dump(2));
    const LoadedLibrary loaded = load_library(dir / "extra.json");
    REQUIRE(loaded.warnings.size() == 1);
    CHECK(testutil::contains(loaded.warnings[0].message, "custom_annotation"));
    CHECK(loaded.library.records == result.library.records);
  }

  SUBCASE("corrupted document is a parse error") {
    testutil::write_file(dir / "garbage.json", "{not json");
    CHECK_THROWS_AS(load_library(dir / "garbage.json"), ParseError);
  }
}

TEST_CASE("trace matrix covers provenance pairs exactly") {
  const Corpus corpus = ingest_corpus(testutil::data("so_corpus"));
  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});
  const TraceMatrix matrix = trace_matrix(result.library, corpus);

  REQUIRE(matrix.sdm_ids.size() == 12);
  REQUIRE(matrix.task_ids.size() == 1);

  std::size_t provenance_pairs = 0;
  for (const PatternRecord& record : result.library.records) {
    if (record.granularity == Granularity::Task) {
      provenance_pairs += record.provenance.size();
    }
  }
  CHECK(matrix.filled_name_count() == provenance_pairs);

  SUBCASE("csv export carries the header and the absence marker") {
    const std::string csv = matrix_csv(matrix);
    CHECK(testutil::contains(csv, "sdm,"));
    CHECK(testutil::contains(csv, "Evaluate legacy systems"));
    CHECK(testutil::contains(csv, "rq,n.a"));
    CHECK(testutil::contains(csv, "stevejones,n.a"));
  }
}

TEST_CASE("an empty library yields a matrix with rows but no columns") {
  const Corpus corpus = ingest_corpus(testutil::fixture("phases_only"));
  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});
  const TraceMatrix matrix = trace_matrix(result.library, corpus);
  CHECK(matrix.sdm_ids.size() == 2);
  CHECK(matrix.task_ids.empty());
}

TEST_CASE("dangling provenance is detected against a mismatched corpus") {
  const Corpus so = ingest_corpus(testutil::data("so_corpus"));
  const MineResult result = mine(so, starter_lexicon(), OperatorConfig{});
  CHECK(dangling_provenance(result.library, so).empty());

  const Corpus other = ingest_corpus(testutil::fixture("re_corpus"));
  const auto dangling = dangling_provenance(result.library, other);
  CHECK(!dangling.empty());

  SUBCASE("derived phase provenance resolves against source phases") {
    MineOptions options;
    options.frames_mode = FramesMode::Derived;
    const MineResult derived = mine(so, starter_lexicon(), OperatorConfig{}, options);
    CHECK(dangling_provenance(derived.library, so).empty());
    CHECK(!dangling_provenance(derived.library, other).empty());
  }
}

TEST_CASE("report renders authored card fields in the uniform layout") {
  PatternLibrary library;
  library.domain_name = "cards";
  PatternRecord phase;
  phase.granularity = Granularity::Phase;
  phase.name = "Test";
  phase.context =
      "A number of artifacts have been produced and ready to evaluate how much "
      "requirements and quality criteria has satisfied.";
  phase.problem = "How produced artifacts can be tested?";
  phase.roles = {"test engineer", "test script writer", "test executor"};
  phase.artifacts = {"test scripts", "test results"};
  phase.id = pattern_id(phase.granularity, phase.name, phase.provenance);
  library.records.push_back(phase);

  Corpus corpus;
  Sdm sdm;
  sdm.id = "m";
  sdm.name = "M";
  corpus.sdms.push_back(sdm);

  const std::string report = render_report(library, corpus);
  CHECK(testutil::contains(report, "[PHASE] Test"));
  CHECK(testutil::contains(report,
                           "ready to evaluate how much requirements and quality "
                           "criteria has satisfied"));
  CHECK(testutil::contains(report, "How produced artifacts can be tested?"));
  CHECK(testutil::contains(report, "test script writer"));
  CHECK(testutil::contains(report, "Consequence: to be explored"));
  CHECK(testutil::contains(report, "Zero merge events recorded."));
}

TEST_CASE("report lists unassigned activities with their best scores") {
  const Corpus corpus = ingest_corpus(testutil::fixture("straddle_corpus"));
  MineOptions options;
  options.frames_mode = FramesMode::File;
  options.frames_file = testutil::fixture("frames_one.json");
  const MineResult result = mine(corpus, make_lexicon({}, {}, {}), OperatorConfig{},
                                 options);
  REQUIRE(result.assignment.unassigned.size() == 1);

  const std::string report = render_report(result.library, corpus);
  CHECK(testutil::contains(report, "strads:s1"));
  CHECK(testutil::contains(report, "synonym 0.000"));
  CHECK(testutil::contains(report, "Unassigned activities: 1"));
  CHECK(testutil::contains(report, "No activities were placed."));
}

TEST_CASE("report names the signal behind each placement") {
  const Corpus corpus = ingest_corpus(testutil::fixture("straddle_corpus"));
  MineOptions options;
  options.frames_mode = FramesMode::File;
  options.frames_file = testutil::fixture("frames_two.json");
  const MineResult result = mine(corpus, make_lexicon({}, {}, {}), OperatorConfig{},
                                 options);
  const std::string report = render_report(result.library, corpus);
  CHECK(testutil::contains(report, "strads:s1 -> alpha, beta (signal: affinity)"));
}

TEST_CASE("report lists oversize activities as split candidates") {
  Corpus corpus;
  Sdm sdm;
  sdm.id = "om";
  sdm.name = "Omnibus";
  sdm.phases.push_back({"p1", "Analysis and Design", {"analysis"}, 0});
  Activity big;
  big.id = "a1";
  big.name = "Do Everything At Once";
  big.phase_id = "p1";
  big.intent_terms = {"analysis", "design"};
  for (int i = 1; i <= 15; ++i) {
    big.steps.push_back({i, "step number " + std::to_string(i)});
  }
  sdm.activities.push_back(big);
  corpus.sdms.push_back(sdm);
  REQUIRE(validate_corpus(corpus).empty());

  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});
  REQUIRE(result.split_candidates.size() == 1);
  const std::string report = render_report(result.library, corpus);
  CHECK(testutil::contains(report, "'Do Everything At Once' (15 steps)"));
}

TEST_CASE("report notes zero tasks for a phases-only corpus") {
  const Corpus corpus = ingest_corpus(testutil::fixture("phases_only"));
  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});

  std::size_t non_phase = 0;
  for (const PatternRecord& record : result.library.records) {
    if (record.granularity != Granularity::Phase) ++non_phase;
  }
  CHECK(non_phase == 0);

  const std::string report = render_report(result.library, corpus);
  CHECK(testutil::contains(report, "Task patterns: 0"));
  CHECK(testutil::contains(report, "No task patterns extracted."));
}
