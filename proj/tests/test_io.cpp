#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "ggb/io.hpp"
#include "ggb/rng.hpp"
#include "support.hpp"

using namespace ggb;

namespace {

struct TempDir {
  std::filesystem::path dir;
  TempDir() {
    dir = std::filesystem::temp_directory_path() /
          ("ggb_io_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(dir);
  }
  ~TempDir() { std::filesystem::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  static inline int counter = 0;
};

void put(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("edge list round trip") {
  TempDir tmp;
  SeedGraph g = generate_graph(GraphKind::erdos_renyi_gnm, 12, 20, 4);
  const std::string path = tmp.path("g.txt");
  write_edge_list(g, path);
  SeedGraph back = read_edge_list(path);
  CHECK(back.p == g.p);
  CHECK(back.edges == g.edges);

  // The written format is 1-based with a header.
  std::string text = read_text_file(path);
  CHECK(text.rfind("p 12\n", 0) == 0);
  CHECK(text.find(" 0") == std::string::npos);
}

TEST_CASE("edge list accepts comments, blanks, and an edge count") {
  TempDir tmp;
  const std::string path = tmp.path("g.txt");
  put(path,
      "# a graph\n"
      "\n"
      "p 4 2\n"
      "1 2\n"
      "   # indented comment\n"
      "3 4\n");
  SeedGraph g = read_edge_list(path);
  CHECK(g.p == 4);
  CHECK(g.m() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 3));
}

TEST_CASE("edge list rejects malformed input") {
  TempDir tmp;
  const std::string path = tmp.path("bad.txt");

  put(path, "1 2\n");
  CHECK_THROWS_AS(read_edge_list(path), Error);  // missing header

  put(path, "p 3\n1 4\n");
  CHECK_THROWS_AS(read_edge_list(path), Error);  // out of range

  put(path, "p 3\n2 2\n");
  CHECK_THROWS_AS(read_edge_list(path), Error);  // self loop

  put(path, "p 3\n1 2\n2 1\n");
  CHECK_THROWS_AS(read_edge_list(path), Error);  // duplicate edge

  put(path, "p 3\n1 2 junk\n");
  CHECK_THROWS_AS(read_edge_list(path), Error);  // trailing tokens

  put(path, "p 0\n");
  CHECK_THROWS_AS(read_edge_list(path), Error);  // invalid node count

  CHECK_THROWS_AS(read_edge_list(tmp.path("missing.txt")), Error);

  // Error messages carry the file and line.
  put(path, "p 3\n1 x\n");
  try {
    read_edge_list(path);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code == ErrorCode::parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("matrix csv round trip preserves doubles exactly") {
  TempDir tmp;
  Rng rng(5);
  Mat m(3, 4);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = rng.normal() * 1e3;
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = -0.0;
  const std::string path = tmp.path("m.csv");
  write_matrix_csv(m, path);
  Mat back = read_matrix_csv(path);
  REQUIRE(back.rows() == 3);
  REQUIRE(back.cols() == 4);
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix csv rejects malformed input") {
  TempDir tmp;
  const std::string path = tmp.path("m.csv");

  put(path, "1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(path), Error);  // ragged

  put(path, "1,2\n3,abc\n");
  CHECK_THROWS_AS(read_matrix_csv(path), Error);  // bad number

  put(path, "1,2\n3,4 junk\n");
  CHECK_THROWS_AS(read_matrix_csv(path), Error);  // trailing garbage

  put(path, "");
  CHECK_THROWS_AS(read_matrix_csv(path), Error);  // empty
}

TEST_CASE("symmetric csv averages tiny asymmetry and rejects the rest") {
  TempDir tmp;
  const std::string path = tmp.path("s.csv");

  put(path, "1,0.5\n0.5000000000001,2\n");
  Mat s = read_symmetric_csv(path);
  CHECK(s(0, 1) == s(1, 0));
  CHECK(s(0, 1) == doctest::Approx(0.5).epsilon(1e-9));

  put(path, "1,0.6\n0.5,2\n");
  CHECK_THROWS_AS(read_symmetric_csv(path), Error);

  put(path, "1,2,3\n4,5,6\n");
  CHECK_THROWS_AS(read_symmetric_csv(path), Error);  // not square
}

TEST_CASE("atomic_write_text replaces content and leaves no temp files") {
  TempDir tmp;
  const std::string path = tmp.path("out.txt");
  atomic_write_text(path, "first\n");
  atomic_write_text(path, "second\n");
  CHECK(read_text_file(path) == "second\n");
  int entries = 0;
  for ([[maybe_unused]] auto& e : std::filesystem::directory_iterator(tmp.dir)) ++entries;
  CHECK(entries == 1);
}
