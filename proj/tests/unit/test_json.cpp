#include <gtest/gtest.h>

#include <random>

#include "magnus/json_io.hpp"
#include "test_support.hpp"

using namespace magnus;

TEST(Json, ExactSeriesRoundTrip) {
  std::mt19937_64 rng(70);
  const QSeries s = magnus::testing::random_series(3, 4, 0, 4, 5, rng);
  const Json j = to_json(s);
  EXPECT_EQ(j.at("mode"), "exact");
  EXPECT_EQ(qseries_from_json(Json::parse(j.dump())), s);
}

TEST(Json, HugeRationalsUseStrings) {
  QSeries s(2, 2);
  const mpz_class big("123456789012345678901234567890");
  Rational q(big, 7);
  q.canonicalize();
  s.add_word({1, 2}, q);
  const Json j = to_json(s);
  EXPECT_TRUE(j["components"]["2"][0]["num"].is_string());
  EXPECT_TRUE(j["components"]["2"][0]["den"].is_number_integer());
  EXPECT_EQ(qseries_from_json(j), s);
}

TEST(Json, FloatSeriesRoundTripIsBitwise) {
  std::mt19937_64 rng(71);
  const FSeries s = magnus::testing::random_fseries(2, 4, 0, 4, rng);
  EXPECT_EQ(fseries_from_json(Json::parse(to_json(s).dump())), s);
  // Exact entries are accepted by the float reader.
  const FSeries half = fseries_from_json(to_json(QSeries::generator(2, 3, 1, Rational(1, 2))));
  EXPECT_EQ(half.coeff({1}), 0.5);
}

TEST(Json, SeriesErrors) {
  Json j = to_json(QSeries::generator(2, 3, 1));
  EXPECT_THROW(qseries_from_json(to_json(FSeries::generator(2, 3, 1))), std::invalid_argument);
  Json bad = j;
  bad["components"]["1"][0]["word"] = {1, 2};
  EXPECT_THROW(qseries_from_json(bad), std::invalid_argument);
  bad = j;
  bad["components"]["1"][0]["word"] = {3};
  EXPECT_THROW(qseries_from_json(bad), std::invalid_argument);
  bad = j;
  bad["components"]["1"][0]["den"] = 0;
  EXPECT_THROW(qseries_from_json(bad), std::invalid_argument);
  bad = j;
  bad.erase("trunc");
  EXPECT_THROW(qseries_from_json(bad), std::invalid_argument);
  bad = j;
  bad["components"]["x"] = Json::array();
  EXPECT_THROW(qseries_from_json(bad), std::invalid_argument);
}

TEST(Json, AutomorphismRoundTrip) {
  std::mt19937_64 rng(72);
  const FreeAut phi = nielsen::random(3, 6, rng);
  const FreeAut back = aut_from_json(Json::parse(to_json(phi).dump()));
  EXPECT_EQ(back.forward(), phi.forward());
  EXPECT_EQ(back.backward(), phi.backward());

  const Json words = Json::parse(R"({"n": 2, "images": {"1": "1 2", "2": [2]}, "inverse_images": {"1": "1 -2", "2": "2"}})");
  EXPECT_EQ(aut_from_json(words).forward().image(1).letters(), (std::vector<int>{1, 2}));
  const Json wrong = Json::parse(R"({"n": 2, "images": {"1": "1 2", "2": [2]}, "inverse_images": {"1": "1 2", "2": "2"}})");
  EXPECT_THROW(aut_from_json(wrong), std::invalid_argument);
  const Json range = Json::parse(R"({"n": 2, "images": {"1": "1 3", "2": [2]}, "inverse_images": {"1": "1", "2": "2"}})");
  EXPECT_THROW(aut_from_json(range), std::invalid_argument);
}

TEST(Json, ParseComplex) {
  EXPECT_EQ(parse_complex("0.3+1.1i"), cplx(0.3, 1.1));
  EXPECT_EQ(parse_complex(" 0.3 - 1.1i "), cplx(0.3, -1.1));
  EXPECT_EQ(parse_complex("i"), cplx(0, 1));
  EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(parse_complex("2"), cplx(2, 0));
  EXPECT_EQ(parse_complex("1e-3+2e+1j"), cplx(1e-3, 20));
  EXPECT_EQ(parse_complex("-1.5e-2i"), cplx(0, -1.5e-2));
  for (const char* bad : {"", "abc", "1+", "1+2", "1++2i", "nan", "1+infi"}) EXPECT_THROW(parse_complex(bad), std::invalid_argument) << bad;
  EXPECT_EQ(complex_from_json(Json::array({1.0, -2.0})), cplx(1, -2));
  EXPECT_EQ(complex_from_json(Json("3-4i")), cplx(3, -4));
  EXPECT_THROW(complex_from_json(Json::array({1.0})), std::invalid_argument);
}

TEST(Json, LoopsFileRoundTrip) {
  LoopsFile f;
  f.tau = {0.3, 1.1};
  f.p0 = {0.41, 0.27};
  f.v = {1, 0};
  f.loops.push_back({"a", {{0.41, 0.27}, {0.9, 0.5}, {1.41, 0.27}}});
  const LoopsFile g = loops_from_json(Json::parse(to_json(f).dump()));
  EXPECT_EQ(g.tau, f.tau);
  ASSERT_EQ(g.loops.size(), 1u);
  EXPECT_EQ(g.loops[0].label, "a");
  EXPECT_EQ(g.loops[0].polyline, f.loops[0].polyline);
  Json j = to_json(f);
  j["loops"][0]["polyline"] = Json::array({Json::array({0.0, 0.0})});
  EXPECT_THROW(loops_from_json(j), std::invalid_argument);
  j.erase("loops");
  EXPECT_THROW(loops_from_json(j), std::invalid_argument);
}

TEST(Json, ArtifactHeaderAndCells) {
  const Json a = artifact("magnus.test", {{"x", 1}});
  EXPECT_EQ(a.at("schema"), "magnus.test");
  EXPECT_EQ(a.at("schema_version"), kSchemaVersion);
  EXPECT_EQ(a.at("library_version"), library_version());
  EXPECT_EQ(a.at("config").at("x"), 1);
  const Json c = to_json(AssocCell(2, {{1, 3}, {1, 2}}));
  EXPECT_EQ(c.at("dim"), 0);
  EXPECT_EQ(c.at("brackets"), Json::parse("[[1, 3], [1, 2]]"));
}

TEST(Json, HomComponentImages) {
  HomComponent<Rational> h(2, 2);
  h.add(0, QSeries(2, 2).encode({1, 2}), Rational(1));
  const Json j = hom_to_json(h, 1, 2);
  EXPECT_EQ(j.at("arity"), 2);
  EXPECT_EQ(qseries_from_json(j.at("images").at("1")), QSeries::word(2, 2, {1, 2}));
  EXPECT_TRUE(qseries_from_json(j.at("images").at("2")).is_zero());
}
