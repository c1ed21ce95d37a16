#include "nobeta/catalog.hpp"
#include "nobeta/generators.hpp"
#include "nobeta/io.hpp"
#include "nobeta/svg.hpp"

#include <gtest/gtest.h>

#include <memory>

using namespace nobeta;
using io::Json;

namespace {

void expectSameBody(const ConvexBody& a, const ConvexBody& b) {
  EXPECT_EQ(a.kind(), b.kind());
  EXPECT_EQ(a.dim(), b.dim());
  EXPECT_EQ(a.name(), b.name());
  ASSERT_EQ(a.vertices().size(), b.vertices().size());
  for (size_t i = 0; i < a.vertices().size(); ++i) EXPECT_EQ(a.vertices()[i], b.vertices()[i]);
  EXPECT_FALSE(b.rescaled());
}

std::string pointerOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const io::JsonError& e) {
    return e.pointer();
  }
  return "(no error)";
}

int count(const std::string& s, const std::string& needle) {
  int n = 0;
  for (size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(BodyJson, RoundTrip) {
  for (const ConvexBody& P : {gen::ball(2), gen::ball(3), gen::square(), gen::cube(), gen::tetrahedron(),
                              gen::ellipse(1.5, 1.0), gen::randomPolytope(5, 3, 12)}) {
    Json j = io::toJson(P);
    ConvexBody Q = io::bodyFromJson(io::parse(io::dump(j)));
    expectSameBody(P, Q);
    EXPECT_EQ(io::dump(io::toJson(Q)), io::dump(j));
  }
}

TEST(BodyJson, FieldNamesAreFixed) {
  Json j = io::toJson(gen::square());
  EXPECT_EQ(j["kind"], "polytope");
  EXPECT_EQ(j["dim"], 2);
  EXPECT_TRUE(j.contains("vertices"));
  Json e = io::toJson(gen::ellipse(1.2, 1.0));
  EXPECT_EQ(e["kind"], "smooth2d");
  EXPECT_EQ(e["samples"].size(), 256u);
}

TEST(BodyJson, ErrorsPointAtTheField) {
  EXPECT_EQ(pointerOf([] { io::bodyFromJson(io::parse(R"({"kind":"blob","dim":2})")); }), "/kind");
  EXPECT_EQ(pointerOf([] { io::bodyFromJson(io::parse(R"({"dim":2})")); }), "/kind");
  EXPECT_EQ(pointerOf([] { io::bodyFromJson(io::parse(R"({"kind":"ball","dim":2,"colour":1})")); }), "/colour");
  EXPECT_EQ(pointerOf([] {
              io::bodyFromJson(io::parse(R"({"kind":"polytope","dim":2,"vertices":[[1,1],[-1,1],[-1,"x"]]})"));
            }),
            "/vertices/2/1");
  EXPECT_EQ(pointerOf([] {
              io::bodyFromJson(io::parse(R"({"kind":"polytope","dim":2,"vertices":[[1,1],[2,1],[1,2]]})"));
            }),
            "/vertices");  // origin outside
  EXPECT_EQ(pointerOf([] { io::parse("{\"kind\": "); }), "/");
  EXPECT_EQ(pointerOf([] { io::bodyFromJson(io::parse(R"({"kind":"ball","dim":0})")); }), "/dim");
}

TEST(TargetJson, RoundTripAndErrors) {
  for (const TargetSet& t : {gen::circle(200), gen::scatter(12, 3), gen::cantorDust(2), gen::decoratedCircle(200)}) {
    TargetSet u = io::targetFromJson(io::parse(io::dump(io::toJson(t))));
    ASSERT_EQ(u.points.size(), t.points.size());
    for (size_t i = 0; i < t.points.size(); ++i) EXPECT_EQ(u.points[i], t.points[i]);
    EXPECT_EQ(u.eps, t.eps);
    EXPECT_EQ(u.generator, t.generator);
    EXPECT_EQ(u.dim, t.dim);
  }
  EXPECT_EQ(pointerOf([] { io::targetFromJson(io::parse(R"({"points":[[0,0]],"eps":"a"})")); }), "/eps");
  EXPECT_EQ(pointerOf([] { io::targetFromJson(io::parse(R"({"points":[[0,0],[0,0,1]],"eps":0.1})")); }),
            "/points/1");
  EXPECT_EQ(pointerOf([] { io::targetFromJson(io::parse(R"({"points":[[0,0],[0,0]],"eps":0.1})")); }), "/points");
  EXPECT_EQ(pointerOf([] { io::targetFromJson(io::parse(R"({"points":[[0,0]],"eps":-1})")); }), "/eps");
}

TEST(RunRecordJson, ByteReplay) {
  auto P = std::make_shared<const ConvexBody>(gen::ball(2));
  TargetSet t = gen::scatter(10, 4, 0.02);
  for (std::uint64_t seed : {1ULL, 2ULL, 18446744073709551615ULL}) {
    RunRecord r = playMatch(randomLegal(), enumerateDeleter(), P, t, 20, seed);
    std::string a = io::dump(io::toJson(r));
    std::string b = io::dump(io::toJson(playMatch(randomLegal(), enumerateDeleter(), P, t, 20, seed)));
    EXPECT_EQ(a, b);
    RunRecord back = io::runRecordFromJson(io::parse(a));
    EXPECT_EQ(io::dump(io::toJson(back)), a);
    EXPECT_EQ(back.seed, seed);
    GameState g = replay(P, t, back);
    EXPECT_EQ(g.survivors(), r.survivors);
    EXPECT_EQ(g.certifiedRound(), r.certifiedRound);
  }
}

TEST(RunRecordJson, SchemaIsChecked) {
  auto P = std::make_shared<const ConvexBody>(gen::ball(2));
  Json j = io::toJson(playMatch(enumerateDeleter(), enumerateDeleter(), P, gen::scatter(3, 1), 2, 0));
  j["schema"] = "nobeta.runrecord/0";
  EXPECT_EQ(pointerOf([&] { io::runRecordFromJson(j); }), "/schema");
  j["schema"] = io::kRunRecordSchema;
  j["moves"][0]["scale"] = "big";
  EXPECT_EQ(pointerOf([&] { io::runRecordFromJson(j); }), "/moves/0/scale");
}

TEST(LatticeJson, RoundTrip) {
  for (const ConvexBody& P : {gen::square(), gen::cube(), gen::triangularPrism()}) {
    FaceLattice L = buildFaceLattice(P);
    FaceLattice M = io::latticeFromJson(io::parse(io::dump(io::toJson(L))));
    ASSERT_EQ(L.faces.size(), M.faces.size());
    for (size_t i = 0; i < L.faces.size(); ++i) {
      EXPECT_EQ(L.faces[i].id, M.faces[i].id);
      EXPECT_EQ(L.faces[i].dim, M.faces[i].dim);
      EXPECT_EQ(L.faces[i].vertices, M.faces[i].vertices);
      EXPECT_EQ(L.faces[i].active, M.faces[i].active);
    }
    EXPECT_EQ(L.covers, M.covers);
  }
}

TEST(ColoredJson, RoundTrip) {
  std::vector<Vec> pts;
  for (int i = 0; i < 9; ++i) pts.push_back(vec({std::cos(0.7 * i), std::sin(0.7 * i)}));
  auto a = ColoredPointSet::fromCones(pts, refinedFamily2D(0.6), 0.5, 1);
  auto b = io::coloredFromJson(io::parse(io::dump(io::toJson(a))));
  EXPECT_EQ(a.color, b.color);
  EXPECT_EQ(a.side, b.side);
  EXPECT_EQ(a.colors, b.colors);
  auto c = ColoredPointSet::fromFunction(pts, 3, [](int x, int y) { return 1 + (x + y) % 3; }, 0.4, 2);
  auto d = io::coloredFromJson(io::parse(io::dump(io::toJson(c))));
  EXPECT_EQ(c.color, d.color);
  EXPECT_FALSE(d.hasSides());
  Json bad = io::toJson(c);
  bad["coloring"][3] = 7;
  EXPECT_EQ(pointerOf([&] { io::coloredFromJson(bad); }), "/coloring");
}

TEST(Svg, RunAndCertificate) {
  auto P = std::make_shared<const ConvexBody>(gen::square());
  TargetSet t = gen::circle(40, 0.5);
  RunRecord r = playMatch(randomLegal(), enumerateDeleter(), P, t, 4, 3);
  std::string s = svg::renderRun(*P, t, r);
  EXPECT_EQ(s.rfind("<?xml", 0), 0u);
  EXPECT_NE(s.find("version=\"1.1\""), std::string::npos);
  EXPECT_EQ(count(s, "<polygon"), static_cast<int>(r.moves.size()));
  EXPECT_EQ(count(s, "stroke-dasharray=\"4,3\""), static_cast<int>(r.moves.size() / 2));
  EXPECT_EQ(count(s, "fill=\"black\""), static_cast<int>(r.survivors.size()));
  EXPECT_NE(s.find("</svg>"), std::string::npos);

  ConvexBody D = gen::ball(2);
  TargetSet c = gen::circle(100);
  auto cert = isGoodCopy(D, {vec({0, 0}), 1.0}, c);
  std::string g = svg::renderGoodCopy(D, c, cert);
  EXPECT_EQ(count(g, "fill=\"#d62728\""), static_cast<int>(cert.limitPoints.size()));
  EXPECT_THROW(svg::renderRun(gen::cube(), t, r), InvalidArgument);
}

TEST(Catalog, Names) {
  EXPECT_EQ(catalog::body("disk").name(), "disk");
  EXPECT_EQ(catalog::body("ngon-4").vertices().size(), 4u);
  EXPECT_EQ(catalog::body("ball-3").dim(), 3);
  EXPECT_EQ(catalog::body("noncoplanar-6").dim(), 3);
  EXPECT_EQ(catalog::target("circle-200").points.size(), 200u);
  EXPECT_NEAR(catalog::target("circle-200").eps, 1.5 * 2 * 3.141592653589793 / 200, 1e-15);
  EXPECT_EQ(catalog::target("scatter-9", 4).points, gen::scatter(9, 4).points);
  EXPECT_THROW(catalog::body("dodecahedron"), InvalidArgument);
  EXPECT_THROW(catalog::body("ngon-x"), InvalidArgument);
  EXPECT_THROW(catalog::target("circle"), InvalidArgument);
  EXPECT_THROW(catalog::strategy("minimax", gen::ball(2), gen::circle(10)), InvalidArgument);
  EXPECT_EQ(catalog::strategy("enumerate", gen::ball(2), gen::circle(10)).tag, "enumerate");
}
