#include <doctest.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "patmine/pipeline.hpp"
#include "patmine/store.hpp"
#include "test_util.hpp"

using namespace patmine;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report_pass(int criterion, const char* label) {
  std::printf("[acceptance] criterion %d (%s): PASS\n", criterion, label);
  std::fflush(stdout);
}

const std::vector<std::string> kSdlcNames = {
    "Initiate", "Analysis and Design", "Construction",
    "Test",     "Deployment",          "Maintain"};

std::vector<const PatternRecord*> records_of(const PatternLibrary& library,
                                             Granularity granularity) {
  std::vector<const PatternRecord*> out;
  for (const PatternRecord& record : library.records) {
    if (record.granularity == granularity) out.push_back(&record);
  }
  return out;
}

WorkingActivity working(const std::string& canonical_id, const std::string& name,
                        const TermSet& intent, int steps = 0) {
  WorkingActivity w;
  w.canonical_id = canonical_id;
  w.name = name;
  w.intent = intent;
  for (int i = 1; i <= steps; ++i) {
    w.steps.push_back({i, name + " step " + std::to_string(i)});
  }
  const auto colon = canonical_id.find(':');
  w.provenance.insert({canonical_id.substr(0, colon), canonical_id.substr(colon + 1)});
  w.frames.insert("f");
  w.home_frame = "f";
  return w;
}

}  // namespace

TEST_CASE("criterion 1: sdlc frame mode yields the six phase records in order") {
  const auto start = Clock::now();
  for (const auto& path : {testutil::fixture("valid_mini"), testutil::fixture("re_corpus"),
                           testutil::data("so_corpus")}) {
    const Corpus corpus = ingest_corpus(path);
    const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});

    std::vector<std::string> phase_names;
    for (const PatternRecord& record : result.library.records) {
      if (record.granularity == Granularity::Phase) phase_names.push_back(record.name);
    }
    REQUIRE(phase_names == kSdlcNames);
    // Phase records must lead the record list in frame order.
    for (std::size_t i = 0; i < 6; ++i) {
      REQUIRE(result.library.records[i].granularity == Granularity::Phase);
      REQUIRE(result.library.records[i].name == kSdlcNames[i]);
    }
  }
  REQUIRE(seconds_since(start) < 1.0);
  report_pass(1, "sdlc frames");
}

TEST_CASE("criterion 2: the stub corpus replicates the similarity table") {
  const auto start = Clock::now();
  const Corpus corpus = ingest_corpus(testutil::data("so_corpus"));
  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});

  const auto tasks = records_of(result.library, Granularity::Task);
  REQUIRE(tasks.size() == 1);

  std::set<std::string> provenance_sdms;
  for (const ActivityRef& ref : tasks[0]->provenance) {
    provenance_sdms.insert(ref.sdm_id);
  }
  const std::set<std::string> expected = {"soad", "soma2008", "cbdi",       "soup",
                                          "msoam", "rup4soa", "soaf",       "papazoglou",
                                          "slm",   "sgmm"};
  REQUIRE(provenance_sdms == expected);

  const TraceMatrix matrix = trace_matrix(result.library, corpus);
  REQUIRE(matrix.task_ids.size() == 1);
  REQUIRE(matrix.sdm_ids.size() == 12);
  for (std::size_t row = 0; row < matrix.sdm_ids.size(); ++row) {
    const bool absent = matrix.cells[row][0].empty();
    if (matrix.sdm_ids[row] == "rq" || matrix.sdm_ids[row] == "stevejones") {
      REQUIRE(absent);
    } else {
      REQUIRE_FALSE(absent);
    }
  }
  const std::string csv = matrix_csv(matrix);
  REQUIRE(testutil::contains(csv, "rq,n.a"));
  REQUIRE(testutil::contains(csv, "stevejones,n.a"));

  REQUIRE(seconds_since(start) < 1.0);
  report_pass(2, "similarity table replication");
}

TEST_CASE("criterion 3: the requirement-engineering stage forms exactly") {
  const Corpus corpus = ingest_corpus(testutil::fixture("re_corpus"));
  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});

  const auto stages = records_of(result.library, Granularity::Stage);
  REQUIRE(stages.size() == 1);
  REQUIRE(testutil::contains(stages[0]->name, "Requirement"));

  std::set<std::string> task_names;
  for (const std::string& child_id : stages[0]->body) {
    const PatternRecord* child = result.library.find(child_id);
    REQUIRE(child != nullptr);
    REQUIRE(child->granularity == Granularity::Task);
    task_names.insert(child->name);
  }
  REQUIRE(task_names == std::set<std::string>{
                            "Feasibility Analysis", "Requirements Elicitation",
                            "Requirements Specification", "Requirements Validation"});
  report_pass(3, "requirement engineering stage");
}

TEST_CASE("criterion 4: the shipped split rule yields the three architecture children") {
  const Corpus corpus = ingest_corpus(testutil::fixture("split_corpus"));
  MineOptions options;
  options.rules = load_split_rules(testutil::data("split_rules.json"));
  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{}, options);

  const auto tasks = records_of(result.library, Granularity::Task);
  std::set<std::string> names;
  for (const PatternRecord* task : tasks) {
    names.insert(task->name);
    REQUIRE(task->provenance == std::set<ActivityRef>{{"arch", "a1"}});
  }
  REQUIRE(names == std::set<std::string>{"Design Logical Architecture",
                                         "Design Technical Architecture",
                                         "Evaluate Alternative Architecture"});
  report_pass(4, "split rule");
}

TEST_CASE("criterion 5: affine partial activities merge without losing steps") {
  const Corpus corpus = ingest_corpus(testutil::fixture("supply_corpus"));
  const MineResult result = mine(corpus, starter_lexicon(), OperatorConfig{});

  const auto tasks = records_of(result.library, Granularity::Task);
  REQUIRE(tasks.size() == 1);
  REQUIRE(tasks[0]->provenance.size() == 2);
  REQUIRE(tasks[0]->body.size() == 4);

  std::set<std::string> merged(tasks[0]->body.begin(), tasks[0]->body.end());
  for (const Sdm& sdm : corpus.sdms) {
    for (const Activity& act : sdm.activities) {
      for (const Step& step : act.steps) {
        REQUIRE(merged.count(step.description) == 1);
      }
    }
  }
  REQUIRE(tasks[0]->artifacts == std::set<std::string>{"component blueprint",
                                                       "structure notes",
                                                       "structure sketch"});
  // Roles union over both provenance sources.
  REQUIRE(tasks[0]->roles == std::set<std::string>{"architect", "designer"});
  report_pass(5, "supply merge");
}

TEST_CASE("criterion 6: clustering agrees with the exhaustive oracle") {
  const auto start = Clock::now();
  std::mt19937 rng(20230911u);
  std::uniform_int_distribution<int> size(1, 10);
  std::uniform_int_distribution<int> term_count(1, 4);
  const std::vector<std::string> pool = {"t1", "t2", "t3", "t4",
                                         "t5", "t6", "t7", "t8"};
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const OperatorConfig base;

  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    std::vector<WorkingActivity> acts;
    for (int i = 0; i < n; ++i) {
      TermSet intent;
      const int terms = term_count(rng);
      for (int t = 0; t < terms; ++t) intent.insert(pool[pick(rng)]);
      acts.push_back(working("m:a" + std::to_string(i), "A" + std::to_string(i), intent));
    }

    // Independent oracle: breadth-first search over the affinity adjacency.
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j) {
          adj[i][j] = semantic_affinity(acts[i].intent, acts[j].intent, base).decision;
        }
      }
    }
    std::vector<int> oracle(n, -1);
    int component_count = 0;
    for (int s = 0; s < n; ++s) {
      if (oracle[s] != -1) continue;
      std::vector<int> queue = {s};
      oracle[s] = component_count;
      while (!queue.empty()) {
        const int node = queue.back();
        queue.pop_back();
        for (int next = 0; next < n; ++next) {
          if (adj[node][next] && oracle[next] == -1) {
            oracle[next] = component_count;
            queue.push_back(next);
          }
        }
      }
      ++component_count;
    }

    OperatorConfig components_cfg = base;
    components_cfg.clustering_mode = ClusteringMode::Components;
    const auto clusters = package_stages(acts, components_cfg);
    REQUIRE(static_cast<int>(clusters.size()) == component_count);
    std::map<std::string, int> index_of;
    for (int i = 0; i < n; ++i) index_of[acts[i].canonical_id] = i;
    for (const StageCluster& cluster : clusters) {
      const int expected = oracle[index_of.at(cluster.members[0].canonical_id)];
      for (const WorkingActivity& member : cluster.members) {
        REQUIRE(oracle[index_of.at(member.canonical_id)] == expected);
      }
    }

    OperatorConfig star_cfg = base;
    star_cfg.clustering_mode = ClusteringMode::SeedStar;
    std::size_t clustered = 0;
    for (const StageCluster& cluster : package_stages(acts, star_cfg)) {
      clustered += cluster.members.size();
      const WorkingActivity* seed = nullptr;
      for (const WorkingActivity& member : cluster.members) {
        if (member.canonical_id == cluster.seed_id) seed = &member;
      }
      REQUIRE(seed != nullptr);
      for (const WorkingActivity& member : cluster.members) {
        if (member.canonical_id != cluster.seed_id) {
          REQUIRE(semantic_affinity(seed->intent, member.intent, base).decision);
        }
      }
    }
    REQUIRE(clustered == acts.size());
  }

  REQUIRE(seconds_since(start) < 10.0);
  report_pass(6, "clustering oracle");
}

TEST_CASE("criterion 7: the property suite holds") {
  const Lexicon& lex = starter_lexicon();
  const OperatorConfig cfg;
  std::mt19937 rng(777001u);

  // Operator symmetry, reflexivity, score range, threshold monotonicity.
  {
    const std::vector<std::string> names = {
        "Asset Analysis", "Evaluate Legacy Systems", "Requirements Elicitation",
        "Design Architecture", "Use-Case Modeling", ""};
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    std::uniform_real_distribution<double> tau(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      OperatorConfig c;
      c.tau_syn = tau(rng);
      c.tau_aff = tau(rng);
      const std::string& a = names[pick(rng)];
      const std::string& b = names[pick(rng)];
      const OpResult ab = synonym(a, b, lex, c);
      const OpResult ba = synonym(b, a, lex, c);
      REQUIRE(ab.score == ba.score);
      REQUIRE(ab.decision == ba.decision);
      REQUIRE(ab.score >= 0.0);
      REQUIRE(ab.score <= 1.0);
      REQUIRE(synonym(a, a, lex, c).score == 1.0);

      OperatorConfig higher = c;
      higher.tau_syn = c.tau_syn + (1.0 - c.tau_syn) * 0.5;
      if (synonym(a, b, lex, higher).decision) REQUIRE(ab.decision);
    }
  }

  // Unify fixpoint and idempotence on generated buckets.
  {
    const std::vector<std::string> name_pool = {
        "Asset Analysis",       "Existing Asset Analysis", "Evaluate Legacy Systems",
        "Design Architecture",  "Requirements Elicitation", "Requirements Identification",
        "Deploy Services",      "Test Planning"};
    std::uniform_int_distribution<int> count(0, 8);
    std::uniform_int_distribution<std::size_t> pick(0, name_pool.size() - 1);
    std::uniform_int_distribution<int> steps(0, 4);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<WorkingActivity> bucket;
      const int n = count(rng);
      for (int i = 0; i < n; ++i) {
        bucket.push_back(working("m" + std::to_string(i) + ":a", name_pool[pick(rng)],
                                 {"asset"}, steps(rng)));
      }
      const BucketResult once = unify(bucket, lex, cfg);
      for (std::size_t i = 0; i < once.activities.size(); ++i) {
        for (std::size_t j = i + 1; j < once.activities.size(); ++j) {
          REQUIRE_FALSE(synonym(once.activities[i].name, once.activities[j].name, lex,
                                cfg).decision);
        }
      }
      const BucketResult twice = unify(once.activities, lex, cfg);
      REQUIRE(twice.activities == once.activities);
      REQUIRE(twice.log.empty());
    }
  }

  // Partition invariant on every bundled mining fixture.
  for (const auto& [path, rules_file] :
       std::vector<std::pair<std::filesystem::path, bool>>{
           {testutil::data("so_corpus"), false},
           {testutil::fixture("re_corpus"), false},
           {testutil::fixture("supply_corpus"), false},
           {testutil::fixture("split_corpus"), true}}) {
    const Corpus corpus = ingest_corpus(path);
    MineOptions options;
    if (rules_file) options.rules = load_split_rules(testutil::data("split_rules.json"));
    const MineResult result = mine(corpus, lex, cfg, options);

    std::set<ActivityRef> covered;
    for (const PatternRecord& record : result.library.records) {
      if (record.granularity == Granularity::Task) {
        covered.insert(record.provenance.begin(), record.provenance.end());
      }
    }
    std::set<ActivityRef> expected;
    for (const Sdm& sdm : corpus.sdms) {
      for (const Activity& act : sdm.activities) expected.insert({sdm.id, act.id});
    }
    for (const UnassignedRecord& u : result.assignment.unassigned) {
      REQUIRE(covered.count(u.ref) == 0);
      covered.insert(u.ref);
    }
    REQUIRE(covered == expected);
  }

  // Library round-trip identity.
  {
    const Corpus corpus = ingest_corpus(testutil::data("so_corpus"));
    const MineResult result = mine(corpus, lex, cfg);
    const auto dir = testutil::scratch_dir("acceptance_roundtrip");
    save_library(result.library, dir / "library.json");
    REQUIRE(load_library(dir / "library.json").library == result.library);
  }

  // End-to-end byte determinism across two identical runs.
  {
    const Corpus corpus = ingest_corpus(testutil::data("so_corpus"));
    const auto dir = testutil::scratch_dir("acceptance_determinism");
    for (const char* tag : {"one", "two"}) {
      const MineResult result = mine(corpus, lex, cfg);
      save_library(result.library, dir / (std::string(tag) + "_library.json"));
      testutil::write_file(dir / (std::string(tag) + "_report.md"),
                           render_report(result.library, corpus));
    }
    REQUIRE(testutil::read_file(dir / "one_library.json") ==
            testutil::read_file(dir / "two_library.json"));
    REQUIRE(testutil::read_file(dir / "one_report.md") ==
            testutil::read_file(dir / "two_report.md"));
  }

  report_pass(7, "property suite");
}
