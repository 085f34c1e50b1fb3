#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "riskcore/scaling.hpp"
#include "riskcore/schema.hpp"
#include "riskcore/synthetic.hpp"

using namespace riskcore;
using namespace riskcore::schema;

namespace {

QuestionnaireSchema small_schema() {
  QuestionSpec s{"q1", "first", QuestionKind::SingleChoice, 3};
  QuestionSpec m{"q2", "second", QuestionKind::MultiChoice, 4};
  QuestionSpec f{"q3", "third", QuestionKind::FillIn, 0};
  return QuestionnaireSchema({s, m, f});
}

}  // namespace

TEST_CASE("vector dimension follows the width rule") {
  CHECK(vector_dimension(small_schema()) == 6);
  CHECK(vector_dimension(QuestionnaireSchema({})) == 0);
  CHECK(vector_dimension(data::default_schema_84()) == 84);
}

TEST_CASE("factor names cover every dimension") {
  const auto s = small_schema();
  CHECK(s.factor_names().size() == 6);
  const auto ref = data::default_schema_84();
  CHECK(ref.factor_names().size() == 84);
}

TEST_CASE("schema rejects invalid specs") {
  QuestionSpec bad{"q1", "x", QuestionKind::SingleChoice, 1};
  CHECK_THROWS_AS(QuestionnaireSchema({bad}), InvalidConfig);
  QuestionSpec a{"dup", "x", QuestionKind::FillIn, 0};
  QuestionSpec b{"dup", "y", QuestionKind::FillIn, 0};
  CHECK_THROWS_AS(QuestionnaireSchema({a, b}), InvalidConfig);
}

TEST_CASE("encoding single, multi, and fill-in answers") {
  const auto s = small_schema();
  const auto v = encode_response(
      s, {Answer::single(2), Answer::multi({0, 3}), Answer::fill(55.0)});
  REQUIRE(v.size() == 6);
  CHECK(v[0] == 2.0);
  CHECK(v[1] == 1.0);
  CHECK(v[2] == 0.0);
  CHECK(v[3] == 0.0);
  CHECK(v[4] == 1.0);
  CHECK(v[5] == 55.0);
}

TEST_CASE("encoding errors") {
  const auto s = small_schema();
  CHECK_THROWS_AS(encode_response(s, {Answer::single(0)}), ShapeMismatch);
  CHECK_THROWS_AS(
      encode_response(
          s, {Answer::single(3), Answer::multi({}), Answer::fill(1.0)}),
      IndexOutOfRange);
  CHECK_THROWS_AS(
      encode_response(s, {Answer::single(0), Answer::multi({5}),
                          Answer::fill(1.0)}),
      IndexOutOfRange);
  CHECK_THROWS_AS(
      encode_response(s, {Answer::single(0), Answer::multi({}),
                          Answer::fill(std::nan(""))}),
      NonFiniteValue);
}

TEST_CASE("encode then decode is identity on choice questions") {
  const auto s = small_schema();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick3(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::set<int> sel;
    for (int o = 0; o < 4; ++o)
      if (unit(rng) < 0.5) sel.insert(o);
    RawResponse resp = {Answer::single(pick3(rng)), Answer::multi(sel),
                        Answer::fill(unit(rng) * 100)};
    const auto decoded = decode_vector(s, encode_response(s, resp));
    CHECK(std::get<int>(decoded[0].value) == std::get<int>(resp[0].value));
    CHECK(std::get<std::set<int>>(decoded[1].value) ==
          std::get<std::set<int>>(resp[1].value));
  }
}

TEST_CASE("choice encoding is injective") {
  // All 3 * 2^4 distinct responses of a single+multi schema map to
  // distinct vectors.
  QuestionSpec s{"a", "a", QuestionKind::SingleChoice, 3};
  QuestionSpec m{"b", "b", QuestionKind::MultiChoice, 4};
  QuestionnaireSchema sch({s, m});
  std::set<std::vector<double>> seen;
  for (int k = 0; k < 3; ++k)
    for (int mask = 0; mask < 16; ++mask) {
      std::set<int> sel;
      for (int o = 0; o < 4; ++o)
        if (mask & (1 << o)) sel.insert(o);
      const auto v =
          encode_response(sch, {Answer::single(k), Answer::multi(sel)});
      seen.insert({v.data(), v.data() + v.size()});
    }
  CHECK(seen.size() == 48);
}

TEST_CASE("schema JSON round trip") {
  const auto s = small_schema();
  const auto back =
      QuestionnaireSchema::from_json_string(s.to_json_string());
  CHECK(back.dimension() == s.dimension());
  CHECK(back.factor_names() == s.factor_names());
}

TEST_CASE("fit_scaling records column extremes") {
  Matrix m(3, 2);
  m << 2, 5, 4, 5, 6, 5;
  const auto p = scaling::fit_scaling(m);
  CHECK(p.col_max[0] == 6.0);
  CHECK(p.col_min[0] == 2.0);
  CHECK_FALSE(p.constant[0]);
  CHECK(p.constant[1]);
}

TEST_CASE("single-row matrix flags every column constant") {
  Matrix m(1, 3);
  m << 1, 2, 3;
  const auto p = scaling::fit_scaling(m);
  for (bool c : p.constant) CHECK(c);
}

TEST_CASE("fit_scaling rejects empty input") {
  CHECK_THROWS_AS(scaling::fit_scaling(Matrix(0, 3)), EmptyMatrix);
}

TEST_CASE("paper orientation maps min to 1 and max to 0") {
  Matrix m(3, 1);
  m << 2, 4, 6;
  const auto scaled = scaling::apply_scaling(scaling::fit_scaling(m), m);
  CHECK(scaled(0, 0) == doctest::Approx(1.0));
  CHECK(scaled(1, 0) == doctest::Approx(0.5));
  CHECK(scaled(2, 0) == doctest::Approx(0.0));
}

TEST_CASE("constant columns scale to zero") {
  Matrix m(3, 1);
  m << 5, 5, 5;
  const auto scaled = scaling::apply_scaling(scaling::fit_scaling(m), m);
  CHECK(scaled.maxCoeff() == 0.0);
}

TEST_CASE("paper orientation is one minus standard on non-constant columns") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  Matrix m(20, 5);
  for (Index i = 0; i < m.size(); ++i) m(i) = gauss(rng);
  const auto paper = scaling::apply_scaling(
      scaling::fit_scaling(m, scaling::Orientation::Paper), m);
  const auto standard = scaling::apply_scaling(
      scaling::fit_scaling(m, scaling::Orientation::Standard), m);
  CHECK((paper.array() - (1.0 - standard.array())).abs().maxCoeff() < 1e-15);
}

TEST_CASE("values from the fitting set land in [0,1]; others clamp") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(-10.0, 10.0);
  Matrix m(30, 4);
  for (Index i = 0; i < m.size(); ++i) m(i) = unit(rng);
  const auto p = scaling::fit_scaling(m);
  const auto scaled = scaling::apply_scaling(p, m);
  CHECK(scaled.minCoeff() >= 0.0);
  CHECK(scaled.maxCoeff() <= 1.0);

  Matrix wild(2, 4);
  wild << 100, 100, 100, 100, -100, -100, -100, -100;
  const auto clamped = scaling::apply_scaling(p, wild);
  CHECK(clamped.minCoeff() >= 0.0);
  CHECK(clamped.maxCoeff() <= 1.0);
}

TEST_CASE("apply_scaling rejects width mismatch") {
  Matrix m(3, 2);
  m << 1, 2, 3, 4, 5, 6;
  const auto p = scaling::fit_scaling(m);
  CHECK_THROWS_AS(scaling::apply_scaling(p, Matrix(2, 3)),
                  DimensionMismatch);
}
