#include "ggb/io.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ggb/linalg.hpp"

namespace ggb {

namespace {

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& what) {
  fail(ErrorCode::parse, path + ": line " + std::to_string(line) + ": " + what);
}

bool blank_or_comment(const std::string& s) {
  for (char c : s) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), ErrorCode::io, "cannot open " + tmp + " for writing");
    out << text;
    out.flush();
    require(out.good(), ErrorCode::io, "write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    fail(ErrorCode::io, "rename to " + path + " failed: " + std::strerror(errno));
  }
}

SeedGraph read_edge_list(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::string line;
  int lineno = 0;
  int p = -1;
  long expected = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line)) continue;
    std::istringstream ls(line);
    if (p < 0) {
      std::string tag;
      if (!(ls >> tag) || tag != "p") parse_fail(path, lineno, "expected header 'p <count>'");
      if (!(ls >> p) || p < 1) parse_fail(path, lineno, "invalid node count");
      if (ls >> expected) {
        // edge count after the node count is optional extra information
      }
      continue;
    }
    int u, v;
    if (!(ls >> u >> v)) parse_fail(path, lineno, "expected 'u v'");
    std::string extra;
    if (ls >> extra) parse_fail(path, lineno, "trailing tokens after edge");
    if (u < 1 || u > p || v < 1 || v > p) parse_fail(path, lineno, "node id out of range");
    if (u == v) parse_fail(path, lineno, "self loop");
    edges.emplace_back(u - 1, v - 1);
  }
  if (p < 0) fail(ErrorCode::parse, path + ": missing 'p <count>' header");
  try {
    return build_graph(p, edges);
  } catch (const Error& e) {
    fail(ErrorCode::parse, path + ": " + e.what());
  }
}

void write_edge_list(const SeedGraph& g, const std::string& path) {
  std::ostringstream out;
  out << "p " << g.p << "\n";
  for (auto [u, v] : g.edges) out << (u + 1) << " " << (v + 1) << "\n";
  atomic_write_text(path, out.str());
}

Mat read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t comma = line.find(',', pos);
      std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                     : comma - pos);
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        parse_fail(path, lineno, "bad number '" + cell + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (width == 0) width = row.size();
    if (row.size() != width) parse_fail(path, lineno, "ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorCode::parse, path + ": empty matrix");
  Mat m(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(i, j) = rows[i][j];
  return m;
}

Mat read_symmetric_csv(const std::string& path) {
  Mat m = read_matrix_csv(path);
  require(m.rows() == m.cols(), ErrorCode::parse, path + ": matrix is not square");
  try {
    return symmetrize(m);
  } catch (const Error& e) {
    fail(ErrorCode::parse, path + ": " + e.what());
  }
}

void write_matrix_csv(const Mat& m, const std::string& path) {
  std::ostringstream out;
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
  atomic_write_text(path, out.str());
}

}  // namespace ggb
