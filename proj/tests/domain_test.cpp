#include "relay/domain.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace relay;

TEST_CASE("valid example passes validation") {
  Example ex;
  ex.id = "a";
  ex.cloud_dist = Categorical{{0.5, 0.3, 0.2}};
  ex.edge_dist = Categorical{{0.4, 0.4, 0.2}};
  ex.label = 1;
  CHECK_NOTHROW(validate_example(ex));
}

TEST_CASE("mass violations are rejected") {
  Example ex;
  ex.id = "a";
  ex.cloud_dist = Categorical{{0.5, 0.6, 0.2}};
  ex.edge_dist = Categorical{{0.5, 0.3, 0.2}};
  CHECK_ERROR_CODE(validate_example(ex), NotADistribution);
  CHECK_ERROR_CODE(make_categorical({0.5, 0.6, 0.2}), NotADistribution);
  CHECK_ERROR_CODE(make_categorical({0.5, -0.1, 0.6}), NotADistribution);
  CHECK_ERROR_CODE(make_categorical({}), NotADistribution);
}

TEST_CASE("label bounds are checked") {
  Example ex;
  ex.id = "a";
  ex.cloud_dist = Categorical{{0.5, 0.3, 0.2}};
  ex.edge_dist = Categorical{{0.5, 0.3, 0.2}};
  ex.label = 5;
  CHECK_ERROR_CODE(validate_example(ex), LabelOutOfRange);
}

TEST_CASE("distributions must agree on K") {
  Example ex;
  ex.id = "a";
  ex.cloud_dist = Categorical{{0.5, 0.5}};
  ex.edge_dist = Categorical{{0.5, 0.3, 0.2}};
  CHECK_ERROR_CODE(validate_example(ex), DimensionMismatch);
}

TEST_CASE("renormalization band") {
  bool scaled = false;
  // Inside the strict tolerance: accepted verbatim.
  Categorical ok = make_categorical({0.5, 0.5}, &scaled);
  CHECK_FALSE(scaled);
  CHECK(ok.probs[0] == 0.5);

  // Between 1e-9 and 1e-6: rescaled to unit mass.
  Categorical near = make_categorical({0.5, 0.5 + 3e-7}, &scaled);
  CHECK(scaled);
  double sum = near.probs[0] + near.probs[1];
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));

  // Beyond 1e-6: rejected.
  CHECK_ERROR_CODE(make_categorical({0.5, 0.50001}), NotADistribution);
}

TEST_CASE("accepted mass is within 1e-9 of its renormalization") {
  // A few representative near-1 sums inside the acceptance band.
  for (double eps : {0.0, 4e-10, -4e-10, 9e-10}) {
    std::vector<double> probs{0.25, 0.25, 0.25, 0.25 + eps};
    Categorical dist = make_categorical(probs);
    double total = 0.0;
    for (double p : dist.probs) total += p;
    double l1 = 0.0;
    for (double p : dist.probs) l1 += std::abs(p - p / total);
    CHECK(l1 < 1e-9);
  }
}

TEST_CASE("label space needs at least two labels") {
  CHECK_NOTHROW(validate_label_space({2}));
  CHECK_NOTHROW(validate_label_space({100}));
  CHECK_ERROR_CODE(validate_label_space({1}), DimensionMismatch);
  CHECK_ERROR_CODE(validate_label_space({0}), DimensionMismatch);
}

TEST_CASE("risk spec bounds") {
  CHECK_NOTHROW(validate_risk({0.0, 0.5}));
  CHECK_ERROR_CODE(validate_risk({1.0, 0.5}), InvalidAlpha);
  CHECK_ERROR_CODE(validate_risk({-0.1, 0.5}), InvalidAlpha);
  CHECK_ERROR_CODE(validate_risk({0.2, 0.0}), InvalidDelta);
  CHECK_ERROR_CODE(validate_risk({0.2, 1.0}), InvalidDelta);
}

TEST_CASE("prediction set sorts and dedupes") {
  PredictionSet set({3, 1, 1, 0});
  CHECK(set.members() == std::vector<Label>{0, 1, 3});
  CHECK(set.contains(1));
  CHECK_FALSE(set.contains(2));
}

TEST_CASE("partition disjointness") {
  DataPartition part;
  part.cal = {0, 1};
  part.tr = {2};
  part.val = {3, 4};
  part.te = {5};
  CHECK_NOTHROW(validate_partition(part, 6));

  part.te = {4};  // reuses a val index
  CHECK_ERROR_CODE(validate_partition(part, 6), PartitionOverlap);

  part.te = {9};  // outside the pool
  CHECK_ERROR_CODE(validate_partition(part, 6), PartitionOverlap);
}
