#include "dsaddle/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace dsaddle {

namespace {

enum class Layout { Array, Coordinate };
enum class Symmetry { General, Symmetric, SkewSymmetric };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Next line that is neither a comment nor blank.
bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

double parse_value(const std::string& token) {
  // strtod accepts the exponent forms written by Fortran and C tools alike.
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0') {
    throw DataError("Matrix Market: cannot parse value '" + token + "'");
  }
  return v;
}

Index parse_index(const std::string& token) {
  Index v = 0;
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw DataError("Matrix Market: cannot parse index '" + token + "'");
  }
  return v;
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw DataError("Matrix Market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw DataError("Matrix Market: missing '%%MatrixMarket matrix' banner");
  }
  Layout layout;
  if (lower(format) == "array") {
    layout = Layout::Array;
  } else if (lower(format) == "coordinate") {
    layout = Layout::Coordinate;
  } else {
    throw DataError("Matrix Market: unknown format '" + format + "'");
  }
  field = lower(field);
  if (field != "real" && field != "double" && field != "integer") {
    throw DataError("Matrix Market: unsupported field '" + field + "'");
  }
  Symmetry sym;
  symmetry = lower(symmetry);
  if (symmetry == "general") {
    sym = Symmetry::General;
  } else if (symmetry == "symmetric") {
    sym = Symmetry::Symmetric;
  } else if (symmetry == "skew-symmetric") {
    sym = Symmetry::SkewSymmetric;
  } else {
    throw DataError("Matrix Market: unsupported symmetry '" + symmetry + "'");
  }

  if (!next_data_line(in, line)) throw DataError("Matrix Market: missing size line");
  std::istringstream size_line(line);
  std::vector<std::string> size_tokens;
  for (std::string tok; size_line >> tok;) size_tokens.push_back(tok);
  const std::size_t expected_tokens = layout == Layout::Array ? 2 : 3;
  if (size_tokens.size() != expected_tokens) {
    throw DataError("Matrix Market: malformed size line '" + line + "'");
  }
  const Index rows = parse_index(size_tokens[0]);
  const Index cols = parse_index(size_tokens[1]);
  if (rows < 0 || cols < 0) throw DataError("Matrix Market: negative size");
  if (sym != Symmetry::General && rows != cols) {
    throw DataError("Matrix Market: symmetric storage needs a square matrix");
  }
  const double mirror = sym == Symmetry::SkewSymmetric ? -1.0 : 1.0;

  Matrix m = Matrix::Zero(rows, cols);
  std::vector<std::string> tokens;
  auto read_tokens = [&](std::size_t count) {
    tokens.clear();
    while (tokens.size() < count) {
      if (!next_data_line(in, line)) {
        throw DataError("Matrix Market: unexpected end of data");
      }
      std::istringstream ls(line);
      for (std::string tok; ls >> tok;) tokens.push_back(tok);
    }
    if (tokens.size() != count) {
      throw DataError("Matrix Market: malformed entry line '" + line + "'");
    }
  };

  if (layout == Layout::Array) {
    // Column-major; symmetric storage lists the lower triangle only.
    for (Index j = 0; j < cols; ++j) {
      Index start = 0;
      if (sym == Symmetry::Symmetric) start = j;
      if (sym == Symmetry::SkewSymmetric) start = j + 1;
      for (Index i = start; i < rows; ++i) {
        read_tokens(1);
        const double v = parse_value(tokens[0]);
        m(i, j) = v;
        if (sym != Symmetry::General && i != j) m(j, i) = mirror * v;
      }
    }
  } else {
    const Index nnz = parse_index(size_tokens[2]);
    if (nnz < 0) throw DataError("Matrix Market: negative entry count");
    for (Index k = 0; k < nnz; ++k) {
      read_tokens(3);
      const Index i = parse_index(tokens[0]) - 1;
      const Index j = parse_index(tokens[1]) - 1;
      if (i < 0 || i >= rows || j < 0 || j >= cols) {
        throw DataError("Matrix Market: entry index out of range");
      }
      const double v = parse_value(tokens[2]);
      m(i, j) += v;
      if (sym != Symmetry::General && i != j) m(j, i) += mirror * v;
    }
  }
  if (next_data_line(in, line)) {
    throw DataError("Matrix Market: trailing data after the last entry");
  }
  return m;
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return read_matrix_market(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_matrix_market(std::ostream& out, const Matrix& m,
                         std::string_view comment) {
  out << "%%MatrixMarket matrix array real general\n";
  if (!comment.empty()) out << "% " << comment << "\n";
  out << m.rows() << " " << m.cols() << "\n";
  std::ostringstream buf;
  buf << std::setprecision(17);
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      // -0 and 0 print identically so equal matrices give equal files.
      const double v = m(i, j) == 0.0 ? 0.0 : m(i, j);
      buf << v << "\n";
    }
  }
  out << buf.str();
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m,
                         std::string_view comment) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_matrix_market(out, m, comment);
  if (!out) throw DataError("write failed for " + path.string());
}

BlockSystem load_block_system(const std::filesystem::path& dir,
                              const ToleranceConfig& tol) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw DataError("input directory " + dir.string() + " does not exist");
  }
  Matrix a = read_matrix_market(dir / "A.mtx");
  Matrix b = read_matrix_market(dir / "B.mtx");
  Matrix c = read_matrix_market(dir / "C.mtx");
  const Index m = b.rows();
  const Index p = c.rows();
  Matrix d = fs::exists(dir / "D.mtx") ? read_matrix_market(dir / "D.mtx")
                                        : Matrix(Matrix::Zero(m, m));
  Matrix e = fs::exists(dir / "E.mtx") ? read_matrix_market(dir / "E.mtx")
                                        : Matrix(Matrix::Zero(p, p));
  return BlockSystem(std::move(a), std::move(b), std::move(c), std::move(d),
                     std::move(e), tol);
}

void save_block_system(const std::filesystem::path& dir,
                       const BlockSystem& sys) {
  std::filesystem::create_directories(dir);
  write_matrix_market(dir / "A.mtx", sys.A(), "block A (n x n)");
  write_matrix_market(dir / "B.mtx", sys.B(), "block B (m x n)");
  write_matrix_market(dir / "C.mtx", sys.C(), "block C (p x m)");
  write_matrix_market(dir / "D.mtx", sys.D(), "block D (m x m), assembled as -D");
  write_matrix_market(dir / "E.mtx", sys.E(), "block E (p x p)");
}

}  // namespace dsaddle
