#include "relay/alignment.hpp"

#include <cmath>

#include "doctest.h"
#include "relay/predsets.hpp"
#include "relay/rng.hpp"
#include "test_util.hpp"

using namespace relay;

TEST_CASE("true alignment sums cloud mass over the edge set") {
  Categorical cloud{{0.5, 0.2, 0.3}};
  CHECK(true_alignment(cloud, PredictionSet({0, 1})) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(true_alignment(cloud, PredictionSet({0, 1, 2})) == 1.0);
  CHECK(true_alignment(cloud, PredictionSet({})) == 0.0);
  CHECK_ERROR_CODE(true_alignment(cloud, PredictionSet({5})), DimensionMismatch);
}

TEST_CASE("edge coverage feature sums edge mass") {
  Categorical edge{{0.6, 0.3, 0.1}};
  CHECK(edge_coverage_feature(edge, PredictionSet({0})) == 0.6);
  CHECK(edge_coverage_feature(edge, PredictionSet({0, 1, 2})) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(edge_coverage_feature(edge, PredictionSet({})) == 0.0);
}

TEST_CASE("cloud hms always reaches its own target coverage") {
  Rng rng(201);
  for (int rep = 0; rep < 200; ++rep) {
    Categorical cloud{rng.dirichlet(2 + rng.below(10), 0.5)};
    const double alpha = rng.uniform01() * 0.9;
    CHECK(true_alignment(cloud, hms(cloud, alpha)) >= 1.0 - alpha - 1e-12);
  }
}

TEST_CASE("isotonic fit keeps monotone data exact") {
  auto predictor = AlignmentPredictor::fit({{"a", 0.2, 0.3}, {"b", 0.8, 0.9}});
  CHECK(predictor.predict(0.2) == 0.3);
  CHECK(predictor.predict(0.8) == 0.9);
  // Between knots the step function holds the left value.
  CHECK(predictor.predict(0.5) == 0.3);
  // Boundary extension.
  CHECK(predictor.predict(0.0) == 0.3);
  CHECK(predictor.predict(1.0) == 0.9);
}

TEST_CASE("isotonic fit pools violators to their mean") {
  auto predictor = AlignmentPredictor::fit({{"a", 0.2, 0.9}, {"b", 0.8, 0.3}});
  CHECK(predictor.predict(0.2) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(predictor.predict(0.8) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("single sample gives a constant predictor") {
  auto predictor = AlignmentPredictor::fit({{"a", 0.5, 0.7}});
  CHECK(predictor.predict(0.0) == 0.7);
  CHECK(predictor.predict(1.0) == 0.7);
}

TEST_CASE("constant predictor helper") {
  auto predictor = AlignmentPredictor::constant(0.5);
  CHECK(predictor.predict(0.1) == 0.5);
  CHECK(predictor.predict(0.9) == 0.5);
}

TEST_CASE("fit rejects an empty training set and bad queries") {
  CHECK_ERROR_CODE(AlignmentPredictor::fit({}), EmptyTrainingSet);
  auto predictor = AlignmentPredictor::constant(0.5);
  CHECK_ERROR_CODE(predictor.predict(1.5), FeatureOutOfRange);
  CHECK_ERROR_CODE(predictor.predict(-0.1), FeatureOutOfRange);
}

TEST_CASE("predictions are monotone in the feature") {
  Rng rng(202);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<AlignmentSample> samples;
    const std::size_t n = 1 + rng.below(40);
    for (std::size_t i = 0; i < n; ++i) {
      samples.push_back({"s" + std::to_string(i), rng.uniform01(), rng.uniform01()});
    }
    auto predictor = AlignmentPredictor::fit(samples);
    double prev = 0.0;
    for (int g = 0; g <= 100; ++g) {
      const double f = g / 100.0;
      const double v = predictor.predict(f);
      CHECK(v >= prev);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("already monotone data is reproduced at training features") {
  Rng rng(203);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> features, targets;
    const std::size_t n = 2 + rng.below(20);
    for (std::size_t i = 0; i < n; ++i) {
      features.push_back(rng.uniform01());
      targets.push_back(rng.uniform01());
    }
    std::sort(features.begin(), features.end());
    std::sort(targets.begin(), targets.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    std::vector<AlignmentSample> samples;
    for (std::size_t i = 0; i < features.size(); ++i) {
      samples.push_back({"s" + std::to_string(i), features[i], targets[i]});
    }
    auto predictor = AlignmentPredictor::fit(samples);
    for (const auto& s : samples) {
      CHECK(predictor.predict(s.feature) == doctest::Approx(s.target).epsilon(1e-12));
    }
  }
}

TEST_CASE("predictor json round trip") {
  Rng rng(204);
  std::vector<AlignmentSample> samples;
  for (int i = 0; i < 25; ++i) {
    samples.push_back({"s" + std::to_string(i), rng.uniform01(), rng.uniform01()});
  }
  auto fitted = AlignmentPredictor::fit(samples);
  auto reloaded = AlignmentPredictor::from_json(fitted.to_json());
  for (int g = 0; g <= 50; ++g) {
    const double f = g / 50.0;
    CHECK(fitted.predict(f) == reloaded.predict(f));
  }
  CHECK_ERROR_CODE(AlignmentPredictor::from_json(nlohmann::json::object()), ParseError);
}
