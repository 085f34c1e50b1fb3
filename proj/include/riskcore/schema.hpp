#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "riskcore/types.hpp"

namespace riskcore::schema {

enum class QuestionKind { SingleChoice, MultiChoice, FillIn };

struct QuestionSpec {
  std::string id;    // e.g. "A02"
  std::string name;  // human label
  QuestionKind kind = QuestionKind::FillIn;
  int option_count = 0;  // choice kinds only, >= 2

  // Width of this question's slice in the risk vector.
  int width() const;
};

class QuestionnaireSchema {
 public:
  QuestionnaireSchema() = default;
  // Validates uniqueness of ids and option counts; derives factor names.
  explicit QuestionnaireSchema(std::vector<QuestionSpec> questions);

  const std::vector<QuestionSpec>& questions() const { return questions_; }
  const std::vector<std::string>& factor_names() const { return factor_names_; }
  Index dimension() const { return static_cast<Index>(factor_names_.size()); }

  static QuestionnaireSchema from_json_file(const std::string& path);
  static QuestionnaireSchema from_json_string(const std::string& text);
  std::string to_json_string() const;

 private:
  std::vector<QuestionSpec> questions_;
  std::vector<std::string> factor_names_;
};

// One answer per question, in schema order.
struct Answer {
  // SingleChoice -> selected index; MultiChoice -> selected index set;
  // FillIn -> real value.
  std::variant<int, std::set<int>, double> value;

  static Answer single(int idx) { return Answer{idx}; }
  static Answer multi(std::set<int> idx) { return Answer{std::move(idx)}; }
  static Answer fill(double v) { return Answer{v}; }
};

using RawResponse = std::vector<Answer>;

Index vector_dimension(const QuestionnaireSchema& schema);

// Encodes one response into an unscaled risk vector of length N.
// single_choice index k -> scalar k; multi_choice -> 0/1 indicators;
// fill_in v -> v; concatenated in schema order.
Vector encode_response(const QuestionnaireSchema& schema,
                       const RawResponse& response);

// Inverse of encode_response on choice widths. Fill-in slices pass through.
RawResponse decode_vector(const QuestionnaireSchema& schema, const Vector& v);

}  // namespace riskcore::schema
