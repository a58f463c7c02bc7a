#include "relay/ingest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "relay/synth.hpp"
#include "test_util.hpp"

using namespace relay;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& contents = "")
      : path("ingest_test_" + name) {
    if (!contents.empty()) {
      std::ofstream out(path);
      out << contents;
    }
  }
  ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("jsonl parsing") {
  TempFile file("basic.jsonl",
                R"({"id":"a","cloud_probs":[0.5,0.5],"edge_probs":[0.6,0.4]})"
                "\n");
  LoadResult result = load_examples(file.path, PoolFormat::jsonl);
  REQUIRE(result.examples.size() == 1);
  CHECK(result.examples[0].id == "a");
  CHECK(result.examples[0].cloud_dist.size() == 2);
  CHECK(result.examples[0].edge_dist.probs[0] == 0.6);
  CHECK_FALSE(result.examples[0].label.has_value());
  CHECK(result.renormalized == 0);
}

TEST_CASE("inconsistent K is reported with its line") {
  TempFile file("badk.jsonl",
                R"({"id":"a","cloud_probs":[0.5,0.5],"edge_probs":[0.6,0.4]})"
                "\n"
                R"({"id":"b","cloud_probs":[0.4,0.3,0.3],"edge_probs":[0.5,0.3,0.2]})"
                "\n");
  try {
    load_examples(file.path, PoolFormat::jsonl);
    FAIL("expected InconsistentK");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InconsistentK);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("probabilities inside the band are renormalized") {
  TempFile file("renorm.jsonl",
                R"({"id":"a","cloud_probs":[0.5,0.5000003],"edge_probs":[0.5,0.5]})"
                "\n");
  LoadResult result = load_examples(file.path, PoolFormat::jsonl);
  CHECK(result.renormalized == 1);
  double sum = 0.0;
  for (double p : result.examples[0].cloud_dist.probs) sum += p;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("malformed inputs become typed errors") {
  TempFile bad_json("parse.jsonl", "{not json\n");
  CHECK_ERROR_CODE(load_examples(bad_json.path, PoolFormat::jsonl), ParseError);

  TempFile bad_mass("mass.jsonl",
                    R"({"id":"a","cloud_probs":[0.5,0.6],"edge_probs":[0.5,0.5]})"
                    "\n");
  CHECK_ERROR_CODE(load_examples(bad_mass.path, PoolFormat::jsonl), ValidationError);

  TempFile dup("dup.jsonl",
               R"({"id":"a","cloud_probs":[0.5,0.5],"edge_probs":[0.5,0.5]})"
               "\n"
               R"({"id":"a","cloud_probs":[0.5,0.5],"edge_probs":[0.5,0.5]})"
               "\n");
  CHECK_ERROR_CODE(load_examples(dup.path, PoolFormat::jsonl), ValidationError);

  CHECK_ERROR_CODE(load_examples("missing_file.jsonl", PoolFormat::jsonl), IoError);

  TempFile one_label("onek.jsonl",
                     R"({"id":"a","cloud_probs":[1.0],"edge_probs":[1.0]})"
                     "\n");
  CHECK_ERROR_CODE(load_examples(one_label.path, PoolFormat::jsonl),
                   ValidationError);
}

TEST_CASE("string labels map in first-seen order") {
  TempFile file("labels.jsonl",
                R"({"id":"a","cloud_probs":[0.5,0.5],"edge_probs":[0.5,0.5],"label":"cat"})"
                "\n"
                R"({"id":"b","cloud_probs":[0.5,0.5],"edge_probs":[0.5,0.5],"label":"dog"})"
                "\n"
                R"({"id":"c","cloud_probs":[0.5,0.5],"edge_probs":[0.5,0.5],"label":"cat"})"
                "\n");
  LoadResult result = load_examples(file.path, PoolFormat::jsonl);
  CHECK(result.label_names == std::vector<std::string>{"cat", "dog"});
  CHECK(*result.examples[0].label == 0);
  CHECK(*result.examples[1].label == 1);
  CHECK(*result.examples[2].label == 0);
}

TEST_CASE("csv parsing with the documented column convention") {
  TempFile file("pool.csv",
                "id,feature_0,feature_1,cloud_0,cloud_1,edge_0,edge_1,label\n"
                "a,0.1,-0.5,0.7,0.3,0.6,0.4,1\n"
                "b,0.2,0.25,0.5,0.5,0.5,0.5,\n");
  LoadResult result = load_examples(file.path, PoolFormat::csv);
  REQUIRE(result.examples.size() == 2);
  CHECK(result.examples[0].features == std::vector<double>{0.1, -0.5});
  CHECK(result.examples[0].cloud_dist.probs == std::vector<double>{0.7, 0.3});
  CHECK(*result.examples[0].label == 1);
  CHECK_FALSE(result.examples[1].label.has_value());

  TempFile unknown("bad.csv", "id,cloud_0,cloud_1,edge_0,edge_1,bogus\n");
  CHECK_ERROR_CODE(load_examples(unknown.path, PoolFormat::csv), ParseError);
}

TEST_CASE("pool export round trips exactly") {
  SynthConfig config;
  config.pool_size = 60;
  config.edge_noise = 0.2;
  config.seed = 21;
  const auto pool = gen_pool(config);
  TempFile file("roundtrip.jsonl");
  write_pool_jsonl(pool, file.path);
  LoadResult loaded = load_examples(file.path, PoolFormat::jsonl);
  REQUIRE(loaded.examples.size() == pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    CHECK(loaded.examples[i].id == pool[i].id);
    CHECK(loaded.examples[i].cloud_dist.probs == pool[i].cloud_dist.probs);
    CHECK(loaded.examples[i].edge_dist.probs == pool[i].edge_dist.probs);
    CHECK(loaded.examples[i].features == pool[i].features);
    CHECK(loaded.examples[i].label == pool[i].label);
  }
}

TEST_CASE("summarize mean and standard error") {
  MetricSummary s = summarize({1.0, 2.0, 3.0});
  CHECK(s.mean == 2.0);
  CHECK(s.se == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
  MetricSummary single = summarize({4.0});
  CHECK(single.mean == 4.0);
  CHECK(single.se == 0.0);
}

namespace {

TrialRecord sample_record() {
  TrialRecord rec;
  rec.edge_set = "hms";
  rec.cascade = "cab";
  rec.alpha = 0.2;
  rec.delta = 0.1;
  rec.trial = 0;
  rec.metrics.satisfaction_rate = 0.9375;
  rec.metrics.deferral_rate = 0.25;
  rec.metrics.normalized_inefficiency = 1.125;
  rec.metrics.fdp = 0.0625;
  rec.metrics.marginal_coverage = 0.8125;
  rec.metrics.n_selected = 75;
  rec.metrics.empty_selection = false;
  return rec;
}

}  // namespace

TEST_CASE("zero trials write a header-only csv and empty json") {
  TempFile csv("empty.csv");
  write_results({}, {}, csv.path, ResultFormat::csv);
  std::string contents = slurp(csv.path);
  CHECK(contents.find("row_type,edge_set") == 0);
  CHECK(contents.find('\n') == contents.size() - 1);

  TempFile json_file("empty.json");
  write_results({}, {}, json_file.path, ResultFormat::json);
  auto doc = nlohmann::json::parse(slurp(json_file.path));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["trials"].empty());
  CHECK_FALSE(doc.contains("aggregates"));
}

TEST_CASE("one trial aggregates to itself with zero se") {
  const TrialRecord rec = sample_record();
  AggregateCell cell = aggregate_trials({rec});
  CHECK(cell.n_trials == 1);
  CHECK(cell.satisfaction_rate.mean == rec.metrics.satisfaction_rate);
  CHECK(cell.satisfaction_rate.se == 0.0);
  CHECK(cell.fdp.mean == rec.metrics.fdp);
  REQUIRE(cell.marginal_coverage.has_value());
  CHECK(cell.marginal_coverage->mean == *rec.metrics.marginal_coverage);
  REQUIRE(cell.satisfaction_rate_nonempty.has_value());
  CHECK(cell.satisfaction_rate_nonempty->mean == rec.metrics.satisfaction_rate);
}

TEST_CASE("json results round trip exactly") {
  const TrialRecord rec = sample_record();
  const AggregateCell cell = aggregate_trials({rec});
  TempFile file("results.json");
  write_results({rec}, {cell}, file.path, ResultFormat::json);
  auto doc = nlohmann::json::parse(slurp(file.path));
  CHECK(doc["schema_version"] == 1);
  REQUIRE(doc["trials"].size() == 1);
  const auto& row = doc["trials"][0];
  CHECK(row["satisfaction_rate"].get<double>() == rec.metrics.satisfaction_rate);
  CHECK(row["deferral_rate"].get<double>() == rec.metrics.deferral_rate);
  CHECK(row["normalized_inefficiency"].get<double>() ==
        rec.metrics.normalized_inefficiency);
  CHECK(row["fdp"].get<double>() == rec.metrics.fdp);
  CHECK(row["marginal_coverage"].get<double>() == *rec.metrics.marginal_coverage);
  CHECK(row["n_selected"].get<std::size_t>() == rec.metrics.n_selected);
  const auto& agg = doc["aggregates"][0];
  CHECK(agg["satisfaction_rate"]["mean"].get<double>() ==
        rec.metrics.satisfaction_rate);
  CHECK(agg["n_trials"] == 1);
}

TEST_CASE("tradeoff table is long format") {
  const AggregateCell cell = aggregate_trials({sample_record()});
  TempFile file("tradeoff.csv");
  write_tradeoff_table({cell}, file.path);
  const std::string contents = slurp(file.path);
  CHECK(contents.find("edge_set,cascade,alpha,delta,metric,mean,se\n") == 0);
  CHECK(contents.find("hms,cab,") != std::string::npos);
  CHECK(contents.find(",deferral_rate,") != std::string::npos);
  CHECK(contents.find(",normalized_inefficiency,") != std::string::npos);
}
