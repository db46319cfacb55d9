//
// eagqa - Copyright 2026 The eagqa Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef EAGQA_EVALKIT_HPP_
#define EAGQA_EVALKIT_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eagqa/matcher.hpp"

namespace eagqa {

// Harmonic mean; 0 when both arguments are 0. Arguments must lie in [0,1].
double f_measure(double precision, double recall);

struct ValueStats {
  std::size_t true_value_inferred = 0;
  std::size_t true_value_instance = 0;
  std::size_t inferred_instance = 0;
  std::optional<double> precision;  // absent when the value was never inferred
  std::optional<double> recall;     // absent when the value never occurs in gold
  std::optional<double> acc;        // present when both of the above are
};

struct InferenceReport {
  std::map<std::string, ValueStats> values;
};

InferenceReport inference_report(const std::vector<std::string>& gold,
                                 const std::vector<std::string>& predicted);

// Lowercase (ASCII), trim, collapse whitespace runs to one space, strip
// trailing punctuation, and map whole words "one".."ten" to digits.
std::string normalize_answer(std::string_view text);

struct AnswerRecord {
  std::string scene_id;
  std::string query_id;
  Answer predicted;
  std::vector<std::string> references;  // nonempty
};

struct AccuracyReport {
  std::map<std::string, double> per_query;
  std::map<std::string, std::size_t> per_query_count;
  double overall = 0.0;
  std::size_t records = 0;
};

bool answer_matches(const AnswerRecord& r);
AccuracyReport answer_accuracy(const std::vector<AnswerRecord>& records);

enum class ReportFormat { kTable, kMachine };

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept;

// Percent with two decimals; absent entries print as "-" (table) or null.
std::string format_inference_report(const InferenceReport& r,
                                    std::string_view attribute,
                                    ReportFormat format);
std::string format_accuracy_report(const AccuracyReport& r, ReportFormat format);

}  // namespace eagqa

#endif  // EAGQA_EVALKIT_HPP_
