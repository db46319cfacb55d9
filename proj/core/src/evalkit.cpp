//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "eagqa/evalkit.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "eagqa/error.hpp"

namespace eagqa {

double f_measure(double precision, double recall) {
  auto in_unit = [](double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; };
  if (!in_unit(precision) || !in_unit(recall)) {
    throw Error(ErrorCode::kValidation, "f_measure: arguments must lie in [0,1]");
  }
  if (precision == 0.0 && recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

InferenceReport inference_report(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& predicted) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kValidation,
                "inference_report: " + std::to_string(gold.size()) +
                    " gold labels but " + std::to_string(predicted.size()) +
                    " predictions");
  }
  InferenceReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++r.values[gold[i]].true_value_instance;
    ++r.values[predicted[i]].inferred_instance;
    if (gold[i] == predicted[i]) ++r.values[gold[i]].true_value_inferred;
  }
  for (auto& [_, s] : r.values) {
    if (s.inferred_instance) {
      s.precision = double(s.true_value_inferred) / double(s.inferred_instance);
    }
    if (s.true_value_instance) {
      s.recall = double(s.true_value_inferred) / double(s.true_value_instance);
    }
    if (s.precision && s.recall) s.acc = f_measure(*s.precision, *s.recall);
  }
  return r;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_trailing_punct(char c) {
  constexpr std::string_view kPunct = ".,!?;:";
  return kPunct.find(c) != std::string_view::npos;
}

constexpr std::array<std::string_view, 10> kNumberWords = {
    "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten"};

}  // namespace

std::string normalize_answer(std::string_view text) {
  std::vector<std::string> words;
  std::string word;
  for (char c : text) {
    if (is_space(c)) {
      if (!word.empty()) words.push_back(std::move(word));
      word.clear();
    } else {
      word += (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c;
    }
  }
  if (!word.empty()) words.push_back(std::move(word));

  while (!words.empty()) {
    auto& last = words.back();
    while (!last.empty() && is_trailing_punct(last.back())) last.pop_back();
    if (!last.empty()) break;
    words.pop_back();
  }

  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    std::string_view mapped = w;
    std::string digits;
    for (std::size_t i = 0; i < kNumberWords.size(); ++i) {
      if (w == kNumberWords[i]) {
        digits = std::to_string(i + 1);
        mapped = digits;
      }
    }
    out += mapped;
  }
  return out;
}

bool answer_matches(const AnswerRecord& r) {
  const std::string got = normalize_answer(r.predicted.render());
  for (const auto& ref : r.references) {
    if (normalize_answer(ref) == got) return true;
  }
  return false;
}

AccuracyReport answer_accuracy(const std::vector<AnswerRecord>& records) {
  if (records.empty()) {
    throw Error(ErrorCode::kValidation, "answer_accuracy: no records");
  }
  AccuracyReport r;
  std::map<std::string, std::size_t> hits;
  std::size_t total_hits = 0;
  for (const auto& rec : records) {
    if (rec.references.empty()) {
      throw Error(ErrorCode::kValidation, "answer_accuracy: record " + rec.scene_id +
                                              "/" + rec.query_id +
                                              " has no reference answers");
    }
    const bool ok = answer_matches(rec);
    ++r.per_query_count[rec.query_id];
    hits[rec.query_id] += ok ? 1 : 0;
    total_hits += ok ? 1 : 0;
  }
  for (const auto& [q, n] : r.per_query_count) {
    r.per_query[q] = double(hits[q]) / double(n);
  }
  r.records = records.size();
  r.overall = double(total_hits) / double(records.size());
  return r;
}

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept {
  if (s == "table") return ReportFormat::kTable;
  if (s == "machine") return ReportFormat::kMachine;
  return std::nullopt;
}

namespace {

std::string percent(std::optional<double> x) {
  if (!x) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", *x * 100.0);
  return buf;
}

nlohmann::ordered_json percent_json(std::optional<double> x) {
  if (!x) return nullptr;
  return std::round(*x * 10000.0) / 100.0;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string lpad(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_inference_report(const InferenceReport& r,
                                    std::string_view attribute,
                                    ReportFormat format) {
  if (format == ReportFormat::kMachine) {
    nlohmann::ordered_json j;
    j["attribute"] = attribute;
    j["values"] = nlohmann::ordered_json::array();
    for (const auto& [v, s] : r.values) {
      nlohmann::ordered_json row;
      row["value"] = v;
      row["precision"] = percent_json(s.precision);
      row["recall"] = percent_json(s.recall);
      row["acc"] = percent_json(s.acc);
      row["true_value_inferred"] = s.true_value_inferred;
      row["true_value_instance"] = s.true_value_instance;
      row["inferred_instance"] = s.inferred_instance;
      j["values"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
  }
  std::size_t w = std::max<std::size_t>(attribute.size(), 5);
  for (const auto& [v, _] : r.values) w = std::max(w, v.size());
  std::ostringstream os;
  os << pad(std::string(attribute), w) << "  " << lpad("Precision", 9) << "  "
     << lpad("Recall", 9) << "  " << lpad("Acc", 9) << '\n';
  for (const auto& [v, s] : r.values) {
    os << pad(v, w) << "  " << lpad(percent(s.precision), 9) << "  "
       << lpad(percent(s.recall), 9) << "  " << lpad(percent(s.acc), 9) << '\n';
  }
  return os.str();
}

std::string format_accuracy_report(const AccuracyReport& r, ReportFormat format) {
  if (format == ReportFormat::kMachine) {
    nlohmann::ordered_json j;
    j["records"] = r.records;
    j["overall"] = r.overall;
    j["per_query"] = nlohmann::ordered_json::object();
    for (const auto& [q, acc] : r.per_query) {
      j["per_query"][q] = {{"accuracy", acc}, {"records", r.per_query_count.at(q)}};
    }
    return j.dump(2) + "\n";
  }
  std::size_t w = 7;
  for (const auto& [q, _] : r.per_query) w = std::max(w, q.size());
  std::ostringstream os;
  os << pad("query", w) << "  " << lpad("records", 7) << "  " << lpad("Acc", 7) << '\n';
  for (const auto& [q, acc] : r.per_query) {
    os << pad(q, w) << "  " << lpad(std::to_string(r.per_query_count.at(q)), 7)
       << "  " << lpad(percent(acc), 7) << '\n';
  }
  os << pad("overall", w) << "  " << lpad(std::to_string(r.records), 7) << "  "
     << lpad(percent(r.overall), 7) << '\n';
  return os.str();
}

}  // namespace eagqa
