#include "pops/io.hpp"
#include "test_util.hpp"

using namespace pops;

TEST(Json, ComplexPairs) {
  EXPECT_EQ(complex_from_json(Json::parse("[1.5, -2]")), Complex(1.5, -2.0));
  EXPECT_EQ(complex_from_json(Json(3.0)), Complex(3.0, 0.0));
  EXPECT_THROW(complex_from_json(Json::parse("[1, 2, 3]")), std::invalid_argument);
  EXPECT_THROW(complex_from_json(Json("x")), std::invalid_argument);
}

TEST(Json, MatrixRoundTripIsBitExact) {
  const Mat m = pops::testing::rand_mat(3, 2, 3);
  const Json j = to_json(m);
  const Mat back = mat_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back, m);
  EXPECT_THROW(mat_from_json(Json::parse("[[1, 2], [3]]")), std::invalid_argument);
  EXPECT_THROW(mat_from_json(Json::parse("[]")), std::invalid_argument);
}

TEST(Json, SpaceKinds) {
  EXPECT_EQ(space_from_json(Json::parse(R"({"kind":"l1","dim":3})")).dim(), 3);
  const auto lp = space_from_json(Json::parse(R"({"kind":"lp","dim":2,"p":3})"));
  EXPECT_EQ(lp.kind(), SpaceKind::WeightedLp);
  EXPECT_DOUBLE_EQ(lp.p(), 3.0);
  const auto li = space_from_json(Json::parse(R"({"kind":"weighted_lp","p":"inf","weights":[1,1]})"));
  EXPECT_TRUE(std::isinf(li.p()));
  const auto ns = space_from_json(Json::parse(R"({"kind":"norming_set","functionals":[[[1,0],[0,1]],[1,-1],[2,0]]})"));
  EXPECT_EQ(ns.kind(), SpaceKind::NormingSet);
  EXPECT_EQ(ns.functionals()(0, 1), Complex(0.0, 1.0));
  const auto q = space_from_json(Json::parse(R"({"kind":"quotient","parent":{"kind":"l1","dim":3},"kernel":[[1,1,1]]})"));
  EXPECT_EQ(q.dim(), 2);
  const auto d = space_from_json(Json::parse(R"({"kind":"dual","parent":{"kind":"linf","dim":2},"dim":2})"));
  EXPECT_EQ(d.kind(), SpaceKind::Dual);
  EXPECT_THROW(space_from_json(Json::parse(R"({"kind":"norming_set","dim":3,"functionals":[[1,0],[0,1]]})")), std::invalid_argument);
  EXPECT_THROW(space_from_json(Json::parse(R"({"kind":"banana"})")), std::invalid_argument);
  EXPECT_THROW(space_from_json(Json::parse(R"({"kind":"lp","dim":2})")), std::invalid_argument);
}

TEST(Json, SpaceRoundTripKeepsNorms) {
  const auto X = space_from_json(Json::parse(
      R"({"kind":"quotient","parent":{"kind":"weighted_lp","p":3,"weights":[1,2,0.5]},"kernel":[[1,0,1]]})"));
  const auto Y = space_from_json(Json::parse(to_json(X).dump()));
  EXPECT_EQ(Y.dim(), X.dim());
  const Vec v = pops::testing::rand_vec(4, X.dim());
  const Bounds a = norm(X, v), b = norm(Y, v);
  EXPECT_TRUE(a.overlaps(b, 1e-9));
}

TEST(Json, Structures) {
  const auto mn = structure_from_json(Json::parse(R"({"kind":"min","p":3,"space":{"kind":"linf","dim":2}})"));
  EXPECT_EQ(mn.kind(), StructureKind::Min);
  EXPECT_DOUBLE_EQ(mn.p().value(), 3.0);
  const auto mx = structure_from_json(Json::parse(R"({"kind":"maxlp","p":2,"cap_m":3,"space":{"kind":"l1","dim":2}})"));
  EXPECT_EQ(mx.cap_m(), 3);
  const auto c = structure_from_json(Json::parse(
      R"({"kind":"concrete","p":3,"space":{"kind":"linf","dim":2},"images":[[[1,0],[0,0]],[[0,0],[0,1]]]})"));
  EXPECT_EQ(c.images().size(), 2u);
  const auto d = structure_from_json(Json::parse(R"({"kind":"dual","parent":{"kind":"min","p":3,"space":{"kind":"l1","dim":2}}})"));
  EXPECT_EQ(d.kind(), StructureKind::Dual);
  const auto q = structure_from_json(Json::parse(
      R"({"kind":"quotient","map":[[1,0,0],[0,1,0]],"parent":{"kind":"min","p":3,"space":{"kind":"l1","dim":3}}})"));
  EXPECT_EQ(q.space().dim(), 2);
  EXPECT_THROW(structure_from_json(Json::parse(R"({"kind":"min","p":0.5,"space":{"kind":"l1","dim":2}})")),
               std::invalid_argument);
}

TEST(Json, MeasureAndPartition) {
  const auto mu = measure_from_json(Json::parse(R"({"weights":[0.5,0.25]})"));
  EXPECT_EQ(mu.atoms(), 2);
  const auto part = partition_from_json(Json::parse("[[0,2],[1]]"));
  ASSERT_EQ(part.size(), 2u);
  EXPECT_EQ(part[0][1], 2);
  EXPECT_THROW(partition_from_json(Json::parse("[0,1]")), std::invalid_argument);
}

TEST(Json, MatrixOverSpace) {
  const auto u = matrix_over_from_json(Json::parse(R"({"rows":1,"cols":2,"entries":[[[1,[0,1]],[2,0]]]})"));
  EXPECT_EQ(u.dim(), 2);
  EXPECT_EQ(u.entry(0, 0)[1], Complex(0.0, 1.0));
  EXPECT_EQ(u.entry(0, 1)[0], Complex(2.0, 0.0));
  EXPECT_THROW(matrix_over_from_json(Json::parse(R"({"rows":2,"cols":1,"entries":[[[1]]]})")), std::invalid_argument);
}

TEST(Json, BracketNulls) {
  Bounds b;
  b.lower = 1.0;
  EXPECT_TRUE(bracket_json(b)[1].is_null());
  EXPECT_EQ(bracket_json(Bounds::exact(2.0, "x")), Json::parse("[2.0, 2.0]"));
}
