#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "qlsplab/encoding.hpp"
#include "qlsplab/error.hpp"

namespace qlsplab {

namespace {

constexpr const char* kHeader = "%%MatrixMarket matrix coordinate real general";

struct Triplet {
  Index row;
  Index col;
  double value;
};

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_triplets(const std::filesystem::path& path, Index rows, Index cols,
                    const std::vector<Triplet>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  }
  out << kHeader << '\n' << rows << ' ' << cols << ' ' << entries.size() << '\n';
  for (const Triplet& t : entries) {
    out << (t.row + 1) << ' ' << (t.col + 1) << ' ' << format_value(t.value) << '\n';
  }
  out.flush();
  if (!out) {
    throw IoError("write failed for " + path.string() + ": " + std::strerror(errno));
  }
}

}  // namespace

void export_matrix_market(const SparseOracleView& view, const std::filesystem::path& path,
                          Index dense_cap) {
  const Index dim = view.space().dim();
  if (dim > dense_cap) {
    throw TooLarge("dimension " + std::to_string(dim) + " exceeds dense cap " +
                   std::to_string(dense_cap));
  }
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(2 * dim));
  for (Index row = 0; row < dim; ++row) {
    for (const auto& [col, value] : row_entries_direct(view, row)) {
      entries.push_back({row, col, value});
    }
  }
  write_triplets(path, dim, dim, entries);
}

void export_matrix_market(const Eigen::MatrixXd& dense, const std::filesystem::path& path) {
  std::vector<Triplet> entries;
  for (Index r = 0; r < dense.rows(); ++r) {
    for (Index c = 0; c < dense.cols(); ++c) {
      if (dense(r, c) != 0.0) entries.push_back({r, c, dense(r, c)});
    }
  }
  write_triplets(path, dense.rows(), dense.cols(), entries);
}

Eigen::MatrixXd read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  }
  std::string line;
  if (!std::getline(in, line) || line.rfind(kHeader, 0) != 0) {
    throw IoError(path.string() + ": missing MatrixMarket coordinate real header");
  }
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  Index rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream size_line(line);
    if (!(size_line >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      throw IoError(path.string() + ": malformed size line");
    }
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows, cols);
  for (Index k = 0; k < nnz; ++k) {
    Index r = 0, c = 0;
    double v = 0.0;
    if (!(in >> r >> c >> v) || r < 1 || r > rows || c < 1 || c > cols) {
      throw IoError(path.string() + ": malformed entry " + std::to_string(k + 1));
    }
    out(r - 1, c - 1) = v;
  }
  return out;
}

}  // namespace qlsplab
