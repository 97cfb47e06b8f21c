#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <regex>

#include "oracles.hpp"
#include "taunav/csv.hpp"
#include "taunav/scene.hpp"
#include "taunav/svg.hpp"

using namespace taunav;
namespace fs = std::filesystem;

namespace {

const std::string kData = TAUNAV_DATA_DIR;

template <class F>
ParseError catch_parse(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ParseError";
  return ParseError("", 0, 0, "");
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(TrackCsv, RoundTripIsBitExact) {
  auto g = oracle::rng(61);
  RawTrack t{"rt", {}};
  double time = 0;
  for (int i = 0; i < 200; ++i) {
    time += oracle::uniform(g, 1e-3, 1.0);
    t.points.push_back({time, oracle::uniform(g, -1e6, 1e6), oracle::uniform(g, -1e-6, 1e-6),
                        oracle::uniform(g, -1, 1) / 3.0});
  }
  const RawTrack back = parse_track_csv(format_track_csv(t));
  ASSERT_EQ(back.points.size(), t.points.size());
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    EXPECT_EQ(back.points[i].t, t.points[i].t);
    EXPECT_EQ(back.points[i].x, t.points[i].x);
    EXPECT_EQ(back.points[i].y, t.points[i].y);
    EXPECT_EQ(*back.points[i].z, *t.points[i].z);
  }
}

TEST(TrackCsv, HeaderOrderExtrasCommentsQuotes) {
  const RawTrack t = parse_track_csv("# comment\ny, extra, t ,x\n1,\"a,b\",0,2\n\n3,q,1,4\n");
  ASSERT_EQ(t.points.size(), 2u);
  EXPECT_EQ(t.points[1].t, 1.0);
  EXPECT_EQ(t.points[1].x, 4.0);
  EXPECT_EQ(t.points[1].y, 3.0);
  EXPECT_FALSE(t.points[0].z);
}

TEST(TrackCsv, ErrorsCarryLineAndColumn) {
  auto e = catch_parse([] { parse_track_csv("t,x,y\n0,1,2\n1,abc,3\n", "f.csv"); });
  EXPECT_EQ(e.line(), 3);
  EXPECT_EQ(e.column(), 3);
  EXPECT_NE(std::string(e.what()).find("f.csv:3:3"), std::string::npos);
  e = catch_parse([] { parse_track_csv("t,x\n0,1\n", "f.csv"); });
  EXPECT_EQ(e.line(), 1);
  e = catch_parse([] { parse_track_csv("t,x,y\n0,1\n", "f.csv"); });
  EXPECT_EQ(e.line(), 2);
  e = catch_parse([] { parse_track_csv("t,x,y,x\n", "f.csv"); });
  EXPECT_EQ(e.column(), 7);
  e = catch_parse([] { parse_track_csv("t,x,y\n0,\"1,2\n", "f.csv"); });
  EXPECT_EQ(e.line(), 2);
  e = catch_parse([] { parse_track_csv("", "f.csv"); });
  EXPECT_NE(std::string(e.what()).find("header"), std::string::npos);
}

TEST(TrackCsv, MissingFileNamesPath) {
  const auto e = catch_parse([] { load_track_csv("/nonexistent/track.csv"); });
  EXPECT_NE(std::string(e.what()).find("/nonexistent/track.csv"), std::string::npos);
}

TEST(TrajectoryCsv, QuotedLabelsParseBack) {
  Trajectory tr;
  tr.segment_labels = {"u_d[A,B]"};
  tr.tau_features = {"A", "B"};
  tr.samples.push_back({0.0, Pose{1, 2, 0.5}, 0.25, 0, {1.5, 2.5}});
  const std::string csv = format_trajectory_csv(tr);
  EXPECT_NE(csv.find("\"u_d[A,B]\""), std::string::npos);
  const RawTrack back = parse_track_csv(csv);
  ASSERT_EQ(back.points.size(), 1u);
  EXPECT_EQ(back.points[0].x, 1.0);
}

TEST(AtomicWrite, ReplacesWithoutLeftovers) {
  const fs::path dir = fs::temp_directory_path() / "taunav_io_test";
  fs::remove_all(dir);
  const std::string path = (dir / "sub" / "out.csv").string();
  write_file_atomic(path, "one\n");
  write_file_atomic(path, "two\n");
  std::ifstream in(path);
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "two");
  EXPECT_FALSE(fs::exists(path + ".tmp"));
  fs::remove_all(dir);
}

TEST(Scene, BundledSceneLoads) {
  const Scene s = load_scene(kData + "/bamberger.scene");
  EXPECT_EQ(s.id, "bamberger");
  EXPECT_EQ(s.woods_edge.size(), 7u);
  EXPECT_EQ(s.at("vine").id, "V");
  EXPECT_EQ(s.at("pole").id, "P");
  EXPECT_TRUE(s.start("red"));
  EXPECT_TRUE(s.start("blue"));
  EXPECT_EQ(*s.woods_edge_index("C"), 2u);
  EXPECT_THROW(s.at("Z"), ValidationError);
}

TEST(Scene, StrictParsing) {
  const std::string head = "taunav-scene 1\nname s\nbounds 0 0 10 10\nfeature A 1 1\nfeature B 2 2\n";
  auto e = catch_parse([&] { parse_scene(head + "woods_edge A B\ncolour red\n", "s.scene"); });
  EXPECT_EQ(e.line(), 7);
  EXPECT_EQ(e.column(), 1);
  e = catch_parse([&] { parse_scene(head + "woods_edge A Q\n", "s.scene"); });
  EXPECT_EQ(e.line(), 6);
  EXPECT_EQ(e.column(), 14);
  e = catch_parse([&] { parse_scene(head + "feature A 3 3\nwoods_edge A B\n", "s.scene"); });
  EXPECT_EQ(e.line(), 6);
  EXPECT_EQ(e.column(), 9);
  e = catch_parse([&] { parse_scene(head + "feature C 1 x\n", "s.scene"); });
  EXPECT_EQ(e.line(), 6);
  EXPECT_EQ(e.column(), 13);
  e = catch_parse([&] { parse_scene(head + "woods_edge A\n", "s.scene"); });
  EXPECT_NE(std::string(e.what()).find("woods_edge"), std::string::npos);
  e = catch_parse([&] { parse_scene("taunav-scene 2\n", "s.scene"); });
  EXPECT_EQ(e.column(), 14);
  e = catch_parse([&] { parse_scene(head + "woods_edge A B\nvine Q\n", "s.scene"); });
  EXPECT_EQ(e.line(), 7);
  e = catch_parse([&] { parse_scene(head + "woods_edge A B\nfeature C 1 1 extra\n", "s.scene"); });
  EXPECT_EQ(e.line(), 7);
}

TEST(Svg, OnePathPerTrajectoryAndOneMarkerPerFeature) {
  const Scene s = load_scene(kData + "/bamberger.scene");
  const std::string svg =
      render_svg(s, {{"a", "red", {{0, 0}, {1, 1}, {2, 0}}}, {"b", "blue", {{0, 1}, {3, 2}}}});
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_EQ(count(svg, "<path "), 2u);
  EXPECT_EQ(count(svg, "<circle "), s.features.size());
  EXPECT_EQ(count(svg, "<polyline "), 1u);
  // every opened element is closed
  EXPECT_EQ(count(svg, "<svg "), count(svg, "</svg>"));
  EXPECT_EQ(count(svg, "<path "), count(svg, "</path>"));
  EXPECT_EQ(count(svg, "<circle "), count(svg, "</circle>"));
  EXPECT_EQ(count(svg, "<title>"), count(svg, "</title>"));
}
