#include "riskcore/schema.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace riskcore::schema {

int QuestionSpec::width() const {
  switch (kind) {
    case QuestionKind::SingleChoice:
      return 1;
    case QuestionKind::MultiChoice:
      return option_count;
    case QuestionKind::FillIn:
      return 1;
  }
  return 0;
}

QuestionnaireSchema::QuestionnaireSchema(std::vector<QuestionSpec> questions)
    : questions_(std::move(questions)) {
  std::unordered_set<std::string> seen;
  for (const auto& q : questions_) {
    if (!seen.insert(q.id).second)
      throw InvalidConfig("duplicate question id: " + q.id);
    if (q.kind != QuestionKind::FillIn && q.option_count < 2)
      throw InvalidConfig("question " + q.id +
                          ": choice kinds need option_count >= 2");
    switch (q.kind) {
      case QuestionKind::SingleChoice:
      case QuestionKind::FillIn:
        factor_names_.push_back(q.name);
        break;
      case QuestionKind::MultiChoice:
        for (int o = 0; o < q.option_count; ++o)
          factor_names_.push_back(q.name + "/opt" + std::to_string(o));
        break;
    }
  }
}

namespace {

QuestionKind kind_from_string(const std::string& s) {
  if (s == "single_choice") return QuestionKind::SingleChoice;
  if (s == "multi_choice") return QuestionKind::MultiChoice;
  if (s == "fill_in") return QuestionKind::FillIn;
  throw InvalidConfig("unknown question kind: " + s);
}

const char* kind_to_string(QuestionKind k) {
  switch (k) {
    case QuestionKind::SingleChoice:
      return "single_choice";
    case QuestionKind::MultiChoice:
      return "multi_choice";
    case QuestionKind::FillIn:
      return "fill_in";
  }
  return "?";
}

}  // namespace

QuestionnaireSchema QuestionnaireSchema::from_json_string(
    const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("schema JSON parse error: ") + e.what());
  }
  if (!doc.is_array()) throw InvalidConfig("schema JSON must be an array");
  std::vector<QuestionSpec> qs;
  for (const auto& item : doc) {
    QuestionSpec q;
    q.id = item.at("id").get<std::string>();
    q.name = item.value("name", q.id);
    q.kind = kind_from_string(item.at("kind").get<std::string>());
    if (q.kind != QuestionKind::FillIn)
      q.option_count = item.at("option_count").get<int>();
    qs.push_back(std::move(q));
  }
  return QuestionnaireSchema(std::move(qs));
}

QuestionnaireSchema QuestionnaireSchema::from_json_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

std::string QuestionnaireSchema::to_json_string() const {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& q : questions_) {
    nlohmann::ordered_json item;
    item["id"] = q.id;
    item["name"] = q.name;
    item["kind"] = kind_to_string(q.kind);
    if (q.kind != QuestionKind::FillIn) item["option_count"] = q.option_count;
    arr.push_back(std::move(item));
  }
  return arr.dump(2);
}

Index vector_dimension(const QuestionnaireSchema& schema) {
  return schema.dimension();
}

Vector encode_response(const QuestionnaireSchema& schema,
                       const RawResponse& response) {
  const auto& qs = schema.questions();
  if (response.size() != qs.size())
    throw ShapeMismatch("response has " + std::to_string(response.size()) +
                        " answers, schema has " + std::to_string(qs.size()) +
                        " questions");
  Vector out(schema.dimension());
  Index pos = 0;
  for (size_t qi = 0; qi < qs.size(); ++qi) {
    const QuestionSpec& q = qs[qi];
    const Answer& a = response[qi];
    switch (q.kind) {
      case QuestionKind::SingleChoice: {
        const int* idx = std::get_if<int>(&a.value);
        if (!idx) throw ShapeMismatch("question " + q.id + ": expected index");
        if (*idx < 0 || *idx >= q.option_count)
          throw IndexOutOfRange("question " + q.id + ": index " +
                                std::to_string(*idx) + " out of range");
        out[pos++] = static_cast<double>(*idx);
        break;
      }
      case QuestionKind::MultiChoice: {
        const auto* sel = std::get_if<std::set<int>>(&a.value);
        if (!sel)
          throw ShapeMismatch("question " + q.id + ": expected index set");
        for (int o = 0; o < q.option_count; ++o) out[pos + o] = 0.0;
        for (int idx : *sel) {
          if (idx < 0 || idx >= q.option_count)
            throw IndexOutOfRange("question " + q.id + ": index " +
                                  std::to_string(idx) + " out of range");
          out[pos + idx] = 1.0;
        }
        pos += q.option_count;
        break;
      }
      case QuestionKind::FillIn: {
        const double* v = std::get_if<double>(&a.value);
        if (!v) throw ShapeMismatch("question " + q.id + ": expected number");
        if (!std::isfinite(*v))
          throw NonFiniteValue("question " + q.id + ": non-finite fill-in");
        out[pos++] = *v;
        break;
      }
    }
  }
  return out;
}

RawResponse decode_vector(const QuestionnaireSchema& schema, const Vector& v) {
  if (v.size() != schema.dimension())
    throw DimensionMismatch("vector length does not match schema dimension");
  RawResponse out;
  Index pos = 0;
  for (const auto& q : schema.questions()) {
    switch (q.kind) {
      case QuestionKind::SingleChoice:
        out.push_back(Answer::single(static_cast<int>(std::lround(v[pos]))));
        pos += 1;
        break;
      case QuestionKind::MultiChoice: {
        std::set<int> sel;
        for (int o = 0; o < q.option_count; ++o)
          if (v[pos + o] != 0.0) sel.insert(o);
        out.push_back(Answer::multi(std::move(sel)));
        pos += q.option_count;
        break;
      }
      case QuestionKind::FillIn:
        out.push_back(Answer::fill(v[pos]));
        pos += 1;
        break;
    }
  }
  return out;
}

}  // namespace riskcore::schema
