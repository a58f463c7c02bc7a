#include "relay/cascade.hpp"

#include <algorithm>
#include <limits>

#include "relay/predsets.hpp"
#include "relay/rng.hpp"

namespace relay {

Route cbd_route(const Categorical& edge_dist, double gamma) {
  double top = 0.0;
  for (double p : edge_dist.probs) top = std::max(top, p);
  return top >= gamma ? Route::edge : Route::cloud;
}

std::vector<PoolItem> screen_order(std::vector<PoolItem> pool) {
  std::sort(pool.begin(), pool.end(), [](const PoolItem& a, const PoolItem& b) {
    if (a.predicted_score != b.predicted_score) {
      return a.predicted_score < b.predicted_score;
    }
    if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
    return a.example_id < b.example_id;
  });
  return pool;
}

double fdp_estimate(std::size_t unscreened_val_miss, std::size_t unscreened_te,
                    std::size_t n_te, std::size_t n_val) {
  if (unscreened_te == 0) return 0.0;
  const double correction =
      static_cast<double>(n_te) / (1.0 + static_cast<double>(n_val));
  return correction * (1.0 + static_cast<double>(unscreened_val_miss)) /
         static_cast<double>(unscreened_te);
}

SelectionResult cab_select(const std::vector<ValEntry>& val,
                           const std::vector<TestEntry>& te,
                           const RiskSpec& spec, std::uint64_t seed) {
  if (val.empty()) throw Error(ErrorCode::EmptyValidation, "no validation items");
  if (te.empty()) throw Error(ErrorCode::EmptyTest, "no test items");
  validate_risk(spec);

  Rng jitter = Rng::substream(seed, 0x7469656272656b00ULL);
  std::vector<PoolItem> pool;
  pool.reserve(val.size() + te.size());
  for (const ValEntry& v : val) {
    pool.push_back({v.id, PoolItem::Origin::validation, v.predicted_score,
                    v.true_score, jitter.uniform01()});
  }
  for (const TestEntry& t : te) {
    pool.push_back({t.id, PoolItem::Origin::test, t.predicted_score,
                    std::nullopt, jitter.uniform01()});
  }
  pool = screen_order(std::move(pool));

  const double misaligned_below = 1.0 - spec.alpha;
  std::size_t val_miss = 0;
  std::size_t uns_te = te.size();
  for (const PoolItem& item : pool) {
    if (item.origin == PoolItem::Origin::validation &&
        *item.true_score < misaligned_below) {
      ++val_miss;
    }
  }

  SelectionResult result;
  result.order = pool;
  std::size_t step = 0;
  for (;;) {
    const double estimate = fdp_estimate(val_miss, uns_te, te.size(), val.size());
    result.fdp_trajectory.push_back(estimate);
    if (estimate <= spec.delta) break;
    // Screen the next item in order.
    const PoolItem& item = pool[step];
    if (item.origin == PoolItem::Origin::validation) {
      if (*item.true_score < misaligned_below) --val_miss;
    } else {
      --uns_te;
    }
    ++step;
  }
  result.stop_step = step;
  result.threshold_score =
      step == 0 ? -std::numeric_limits<double>::infinity()
                : pool[step - 1].predicted_score;
  for (std::size_t i = step; i < pool.size(); ++i) {
    if (pool[i].origin == PoolItem::Origin::test) {
      result.selected_ids.push_back(pool[i].example_id);
    }
  }
  std::sort(result.selected_ids.begin(), result.selected_ids.end());
  return result;
}

PredictionSet assemble_prediction(const Example& example, bool selected,
                                  const PredictionSet& edge_set, double alpha) {
  if (selected) return edge_set;
  return hms(example.cloud_dist, alpha);
}

}  // namespace relay
