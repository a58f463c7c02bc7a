#include "relay/ingest.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace relay {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct LabelMapper {
  std::unordered_map<std::string, Label> by_name;
  std::vector<std::string> names;

  Label map(const std::string& name) {
    auto it = by_name.find(name);
    if (it != by_name.end()) return it->second;
    const Label idx = static_cast<Label>(names.size());
    by_name.emplace(name, idx);
    names.push_back(name);
    return idx;
  }
};

Categorical parse_probs(const std::vector<double>& probs, std::size_t line,
                        std::size_t* renormalized) {
  try {
    bool scaled = false;
    Categorical dist = make_categorical(probs, &scaled);
    if (scaled && renormalized) ++*renormalized;
    return dist;
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError,
                "line " + std::to_string(line) + ": " + e.what());
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

LoadResult load_jsonl(std::istream& in) {
  LoadResult result;
  LabelMapper mapper;
  std::unordered_set<std::string> seen_ids;
  int inferred_k = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    Example ex;
    try {
      ex.id = record.at("id").get<std::string>();
      if (record.contains("features") && !record["features"].is_null()) {
        ex.features = record["features"].get<std::vector<double>>();
      }
      const auto cloud = record.at("cloud_probs").get<std::vector<double>>();
      const auto edge = record.at("edge_probs").get<std::vector<double>>();
      if (inferred_k < 0) {
        inferred_k = static_cast<int>(cloud.size());
        try {
          validate_label_space({inferred_k});
        } catch (const Error& e) {
          throw Error(ErrorCode::ValidationError,
                      "line " + std::to_string(line_no) + ": " + e.message());
        }
      }
      if (static_cast<int>(cloud.size()) != inferred_k ||
          static_cast<int>(edge.size()) != inferred_k) {
        throw Error(ErrorCode::InconsistentK,
                    "line " + std::to_string(line_no) + ": expected K=" +
                        std::to_string(inferred_k));
      }
      ex.cloud_dist = parse_probs(cloud, line_no, &result.renormalized);
      ex.edge_dist = parse_probs(edge, line_no, &result.renormalized);
      if (record.contains("label") && !record["label"].is_null()) {
        if (record["label"].is_string()) {
          ex.label = mapper.map(record["label"].get<std::string>());
        } else {
          ex.label = record["label"].get<Label>();
        }
      }
    } catch (const Error&) {
      throw;
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    try {
      validate_example(ex);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen_ids.insert(ex.id).second) {
      throw Error(ErrorCode::ValidationError,
                  "line " + std::to_string(line_no) + ": duplicate id " + ex.id);
    }
    result.examples.push_back(std::move(ex));
  }
  result.label_names = mapper.names;
  return result;
}

LoadResult load_csv(std::istream& in) {
  LoadResult result;
  LabelMapper mapper;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::ParseError, "line 1: missing CSV header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv_line(line);
  int id_col = -1, label_col = -1;
  std::vector<int> feature_cols, cloud_cols, edge_cols;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string& name = header[i];
    if (name == "id") id_col = static_cast<int>(i);
    else if (name == "label") label_col = static_cast<int>(i);
    else if (name.rfind("feature_", 0) == 0) feature_cols.push_back(static_cast<int>(i));
    else if (name.rfind("cloud_", 0) == 0) cloud_cols.push_back(static_cast<int>(i));
    else if (name.rfind("edge_", 0) == 0) edge_cols.push_back(static_cast<int>(i));
    else {
      throw Error(ErrorCode::ParseError, "line 1: unknown column '" + name + "'");
    }
  }
  if (id_col < 0 || cloud_cols.empty() || edge_cols.empty()) {
    throw Error(ErrorCode::ParseError,
                "line 1: header needs id, cloud_*, edge_* columns");
  }
  if (cloud_cols.size() != edge_cols.size()) {
    throw Error(ErrorCode::InconsistentK,
                "line 1: cloud has " + std::to_string(cloud_cols.size()) +
                    " columns, edge has " + std::to_string(edge_cols.size()));
  }
  try {
    validate_label_space({static_cast<int>(cloud_cols.size())});
  } catch (const Error& e) {
    throw Error(ErrorCode::ValidationError, "line 1: " + e.message());
  }

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    auto number = [&](int col) {
      try {
        std::size_t pos = 0;
        const double v = std::stod(fields[static_cast<std::size_t>(col)], &pos);
        if (pos != fields[static_cast<std::size_t>(col)].size()) {
          throw std::invalid_argument("trailing characters");
        }
        return v;
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line_no) + ": bad number '" +
                        fields[static_cast<std::size_t>(col)] + "'");
      }
    };
    Example ex;
    ex.id = fields[static_cast<std::size_t>(id_col)];
    for (int col : feature_cols) ex.features.push_back(number(col));
    std::vector<double> cloud, edge;
    for (int col : cloud_cols) cloud.push_back(number(col));
    for (int col : edge_cols) edge.push_back(number(col));
    ex.cloud_dist = parse_probs(cloud, line_no, &result.renormalized);
    ex.edge_dist = parse_probs(edge, line_no, &result.renormalized);
    if (label_col >= 0) {
      const std::string& raw = fields[static_cast<std::size_t>(label_col)];
      if (!raw.empty()) {
        char* end = nullptr;
        const long parsed = std::strtol(raw.c_str(), &end, 10);
        if (end && *end == '\0') {
          ex.label = static_cast<Label>(parsed);
        } else {
          ex.label = mapper.map(raw);
        }
      }
    }
    try {
      validate_example(ex);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!seen_ids.insert(ex.id).second) {
      throw Error(ErrorCode::ValidationError,
                  "line " + std::to_string(line_no) + ": duplicate id " + ex.id);
    }
    result.examples.push_back(std::move(ex));
  }
  result.label_names = mapper.names;
  return result;
}

}  // namespace

LoadResult load_examples(const std::string& path, PoolFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open " + path);
  }
  return format == PoolFormat::jsonl ? load_jsonl(in) : load_csv(in);
}

void write_pool_jsonl(const std::vector<Example>& pool, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
  for (const Example& ex : pool) {
    json record;
    record["id"] = ex.id;
    if (!ex.features.empty()) record["features"] = ex.features;
    record["cloud_probs"] = ex.cloud_dist.probs;
    record["edge_probs"] = ex.edge_dist.probs;
    if (ex.label) record["label"] = *ex.label;
    out << record.dump() << '\n';
  }
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path);
  }
}

MetricSummary summarize(const std::vector<double>& values) {
  MetricSummary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.se = std::sqrt(sq / static_cast<double>(values.size() - 1)) /
           std::sqrt(static_cast<double>(values.size()));
  }
  return s;
}

AggregateCell aggregate_trials(const std::vector<TrialRecord>& trials) {
  if (trials.empty()) {
    throw Error(ErrorCode::Internal, "no trials to aggregate");
  }
  AggregateCell cell;
  cell.edge_set = trials.front().edge_set;
  cell.cascade = trials.front().cascade;
  cell.alpha = trials.front().alpha;
  cell.delta = trials.front().delta;
  cell.n_trials = trials.size();

  std::vector<double> sat, dr, ni, fdp_vals, cov, sat_nonempty;
  bool all_cov = true;
  for (const TrialRecord& t : trials) {
    sat.push_back(t.metrics.satisfaction_rate);
    dr.push_back(t.metrics.deferral_rate);
    ni.push_back(t.metrics.normalized_inefficiency);
    fdp_vals.push_back(t.metrics.fdp);
    if (t.metrics.marginal_coverage) {
      cov.push_back(*t.metrics.marginal_coverage);
    } else {
      all_cov = false;
    }
    if (t.metrics.empty_selection) {
      ++cell.n_empty_selection;
    } else {
      sat_nonempty.push_back(t.metrics.satisfaction_rate);
    }
  }
  cell.satisfaction_rate = summarize(sat);
  cell.deferral_rate = summarize(dr);
  cell.normalized_inefficiency = summarize(ni);
  cell.fdp = summarize(fdp_vals);
  if (all_cov && !cov.empty()) cell.marginal_coverage = summarize(cov);
  if (!sat_nonempty.empty()) {
    cell.satisfaction_rate_nonempty = summarize(sat_nonempty);
  }
  return cell;
}

namespace {

const char* kResultHeader =
    "row_type,edge_set,cascade,alpha,delta,trial,satisfaction_rate,"
    "deferral_rate,normalized_inefficiency,fdp,marginal_coverage,n_selected,"
    "empty_selection,satisfaction_rate_nonempty";

void write_csv(const std::vector<TrialRecord>& trials,
               const std::vector<AggregateCell>& aggregates, std::ostream& out) {
  out << kResultHeader << '\n';
  for (const TrialRecord& t : trials) {
    out << "trial," << t.edge_set << ',' << t.cascade << ','
        << fmt_double(t.alpha) << ',' << fmt_double(t.delta) << ',' << t.trial
        << ',' << fmt_double(t.metrics.satisfaction_rate) << ','
        << fmt_double(t.metrics.deferral_rate) << ','
        << fmt_double(t.metrics.normalized_inefficiency) << ','
        << fmt_double(t.metrics.fdp) << ','
        << (t.metrics.marginal_coverage ? fmt_double(*t.metrics.marginal_coverage)
                                        : std::string())
        << ',' << t.metrics.n_selected << ','
        << (t.metrics.empty_selection ? 1 : 0) << ",\n";
  }
  for (const AggregateCell& a : aggregates) {
    const double n = static_cast<double>(a.n_trials);
    out << "mean," << a.edge_set << ',' << a.cascade << ',' << fmt_double(a.alpha)
        << ',' << fmt_double(a.delta) << ",," << fmt_double(a.satisfaction_rate.mean)
        << ',' << fmt_double(a.deferral_rate.mean) << ','
        << fmt_double(a.normalized_inefficiency.mean) << ','
        << fmt_double(a.fdp.mean) << ','
        << (a.marginal_coverage ? fmt_double(a.marginal_coverage->mean)
                                : std::string())
        << ",," << fmt_double(static_cast<double>(a.n_empty_selection) / n) << ','
        << (a.satisfaction_rate_nonempty
                ? fmt_double(a.satisfaction_rate_nonempty->mean)
                : std::string())
        << '\n';
    out << "se," << a.edge_set << ',' << a.cascade << ',' << fmt_double(a.alpha)
        << ',' << fmt_double(a.delta) << ",," << fmt_double(a.satisfaction_rate.se)
        << ',' << fmt_double(a.deferral_rate.se) << ','
        << fmt_double(a.normalized_inefficiency.se) << ',' << fmt_double(a.fdp.se)
        << ','
        << (a.marginal_coverage ? fmt_double(a.marginal_coverage->se)
                                : std::string())
        << ",,,"
        << (a.satisfaction_rate_nonempty
                ? fmt_double(a.satisfaction_rate_nonempty->se)
                : std::string())
        << '\n';
  }
}

json summary_json(const MetricSummary& s) {
  return {{"mean", s.mean}, {"se", s.se}};
}

void write_json(const std::vector<TrialRecord>& trials,
                const std::vector<AggregateCell>& aggregates, std::ostream& out) {
  json doc;
  doc["schema_version"] = 1;
  doc["trials"] = json::array();
  for (const TrialRecord& t : trials) {
    json row = {{"edge_set", t.edge_set},
                {"cascade", t.cascade},
                {"alpha", t.alpha},
                {"delta", t.delta},
                {"trial", t.trial},
                {"satisfaction_rate", t.metrics.satisfaction_rate},
                {"deferral_rate", t.metrics.deferral_rate},
                {"normalized_inefficiency", t.metrics.normalized_inefficiency},
                {"fdp", t.metrics.fdp},
                {"n_selected", t.metrics.n_selected},
                {"empty_selection", t.metrics.empty_selection}};
    if (t.metrics.marginal_coverage) {
      row["marginal_coverage"] = *t.metrics.marginal_coverage;
    } else {
      row["marginal_coverage"] = nullptr;
    }
    doc["trials"].push_back(std::move(row));
  }
  if (!aggregates.empty()) {
    doc["aggregates"] = json::array();
    for (const AggregateCell& a : aggregates) {
      json row = {{"edge_set", a.edge_set},
                  {"cascade", a.cascade},
                  {"alpha", a.alpha},
                  {"delta", a.delta},
                  {"n_trials", a.n_trials},
                  {"n_empty_selection", a.n_empty_selection},
                  {"satisfaction_rate", summary_json(a.satisfaction_rate)},
                  {"deferral_rate", summary_json(a.deferral_rate)},
                  {"normalized_inefficiency",
                   summary_json(a.normalized_inefficiency)},
                  {"fdp", summary_json(a.fdp)}};
      row["marginal_coverage"] =
          a.marginal_coverage ? summary_json(*a.marginal_coverage) : json(nullptr);
      row["satisfaction_rate_nonempty"] =
          a.satisfaction_rate_nonempty ? summary_json(*a.satisfaction_rate_nonempty)
                                       : json(nullptr);
      doc["aggregates"].push_back(std::move(row));
    }
  }
  out << doc.dump(2) << '\n';
}

}  // namespace

void write_results(const std::vector<TrialRecord>& trials,
                   const std::vector<AggregateCell>& aggregates,
                   const std::string& path, ResultFormat format) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
  if (format == ResultFormat::csv) {
    write_csv(trials, aggregates, out);
  } else {
    write_json(trials, aggregates, out);
  }
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path);
  }
}

void write_tradeoff_table(const std::vector<AggregateCell>& aggregates,
                          const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot write " + path);
  }
  out << "edge_set,cascade,alpha,delta,metric,mean,se\n";
  for (const AggregateCell& a : aggregates) {
    auto row = [&](const char* metric, const MetricSummary& s) {
      out << a.edge_set << ',' << a.cascade << ',' << fmt_double(a.alpha) << ','
          << fmt_double(a.delta) << ',' << metric << ',' << fmt_double(s.mean)
          << ',' << fmt_double(s.se) << '\n';
    };
    row("satisfaction_rate", a.satisfaction_rate);
    row("deferral_rate", a.deferral_rate);
    row("normalized_inefficiency", a.normalized_inefficiency);
    row("fdp", a.fdp);
    if (a.marginal_coverage) row("marginal_coverage", *a.marginal_coverage);
  }
  if (!out) {
    throw Error(ErrorCode::IoError, "write failed for " + path);
  }
}

}  // namespace relay
