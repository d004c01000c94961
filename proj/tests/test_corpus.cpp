#include <doctest.h>

#include "patmine/corpus.hpp"
#include "test_util.hpp"

using namespace patmine;

TEST_CASE("ingest preserves document order and manifest data") {
  const Corpus corpus = ingest_corpus(testutil::fixture("valid_mini"));
  REQUIRE(corpus.sdms.size() == 3);
  CHECK(corpus.sdms[0].id == "alpha");
  CHECK(corpus.sdms[1].id == "beta");
  CHECK(corpus.sdms[2].id == "gamma");
  CHECK(corpus.domain_name == "mini");
  CHECK(corpus.baseline_sdm_ids == std::set<std::string>{"alpha"});
  CHECK(corpus.total_activities() == 4);
}

TEST_CASE("ingest is pure given file contents") {
  const Corpus a = ingest_corpus(testutil::fixture("valid_mini"));
  const Corpus b = ingest_corpus(testutil::fixture("valid_mini"));
  CHECK(a == b);
}

TEST_CASE("a dangling phase reference fails ingestion naming the activity") {
  CHECK_THROWS_WITH_AS(ingest_corpus(testutil::fixture("dangling_phase")),
                       doctest::Contains("a7"), ValidationError);
}

TEST_CASE("a missing corpus directory is an I/O error") {
  CHECK_THROWS_AS(ingest_corpus(testutil::fixture("no_such_corpus")), IoError);
}

TEST_CASE("the bundled stub corpus ingests with the expected shape") {
  const Corpus corpus = ingest_corpus(testutil::data("so_corpus"));
  REQUIRE(corpus.sdms.size() == 12);
  CHECK(corpus.domain_name == "service-oriented");

  const Sdm* soad = corpus.find_sdm("soad");
  REQUIRE(soad != nullptr);
  CHECK(soad->name == "SOAD");
  REQUIRE(soad->activities.size() == 1);
  CHECK(soad->activities[0].name == "Evaluate legacy systems");

  const Sdm* rq = corpus.find_sdm("rq");
  REQUIRE(rq != nullptr);
  CHECK(rq->activities.empty());
  CHECK(corpus.baseline_sdm_ids ==
        std::set<std::string>{"soma2008", "cbdi", "papazoglou"});
}

TEST_CASE("validate_corpus reports each invariant violation") {
  Corpus corpus = ingest_corpus(testutil::fixture("valid_mini"));
  SUBCASE("valid corpus yields no diagnostics") {
    CHECK(validate_corpus(corpus).empty());
  }

  SUBCASE("empty intent terms") {
    corpus.sdms[0].activities[0].intent_terms.clear();
    const auto diagnostics = validate_corpus(corpus);
    REQUIRE(diagnostics.size() == 1);
    CHECK(diagnostics[0].severity == Severity::Error);
    CHECK(testutil::contains(diagnostics[0].message, "intent"));
  }

  SUBCASE("duplicate activity id produces one diagnostic naming it") {
    Activity copy = corpus.sdms[0].activities[0];
    corpus.sdms[0].activities.push_back(copy);
    const auto diagnostics = validate_corpus(corpus);
    REQUIRE(diagnostics.size() == 1);
    CHECK(testutil::contains(diagnostics[0].message, "a1"));
  }

  SUBCASE("duplicate sdm id") {
    corpus.sdms.push_back(corpus.sdms[0]);
    const auto diagnostics = validate_corpus(corpus);
    CHECK(has_errors(diagnostics));
    CHECK(testutil::contains(error_summary(diagnostics), "alpha"));
  }

  SUBCASE("phase order values must strictly increase") {
    corpus.sdms[0].phases[1].order = 0;
    CHECK(has_errors(validate_corpus(corpus)));
  }

  SUBCASE("step indices must be contiguous from 1") {
    corpus.sdms[0].activities[0].steps[1].index = 5;
    CHECK(has_errors(validate_corpus(corpus)));
  }

  SUBCASE("baseline ids must resolve") {
    corpus.baseline_sdm_ids.insert("ghost");
    const auto diagnostics = validate_corpus(corpus);
    CHECK(has_errors(diagnostics));
    CHECK(testutil::contains(error_summary(diagnostics), "ghost"));
  }

  SUBCASE("empty corpus") {
    corpus.sdms.clear();
    corpus.baseline_sdm_ids.clear();
    CHECK(has_errors(validate_corpus(corpus)));
  }
}

TEST_CASE("duplicate activity id fixture fails validation") {
  const Corpus corpus = parse_corpus(testutil::fixture("dup_activity"));
  const auto diagnostics = validate_corpus(corpus);
  REQUIRE(diagnostics.size() == 1);
  CHECK(testutil::contains(diagnostics[0].message, "a1"));
}

TEST_CASE("corpus round-trips through its serialization") {
  for (const char* name : {"valid_mini", "re_corpus"}) {
    const Corpus original = ingest_corpus(testutil::fixture(name));
    const auto dir = testutil::scratch_dir(std::string("roundtrip_") + name);
    write_corpus(original, dir);
    const Corpus reloaded = ingest_corpus(dir);
    CHECK(reloaded == original);
  }
  const Corpus so = ingest_corpus(testutil::data("so_corpus"));
  const auto dir = testutil::scratch_dir("roundtrip_so");
  write_corpus(so, dir);
  CHECK(ingest_corpus(dir) == so);
}
