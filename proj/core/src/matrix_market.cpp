#include "dhkrylov/matrix_market.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "dhkrylov/errors.hpp"

namespace dhk {

namespace {

enum class Field { Real, Integer, Complex, Pattern };
enum class Symmetry { General, Symmetric, SkewSymmetric, Hermitian };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    return true;
  }
  return false;
}

template <typename T = Scalar>
T make_scalar(double re, double im) {
  if constexpr (std::is_same_v<T, Real>) {
    if (im != 0.0) {
      throw IoError(
          "matrix market: complex entry with nonzero imaginary part in a "
          "real build");
    }
    return re;
  } else {
    return T(re, im);
  }
}

double parse_double(std::istringstream& ls) {
  std::string token;
  if (!(ls >> token)) throw IoError("matrix market: missing value");
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw IoError("matrix market: malformed value '" + token + "'");
  }
  return v;
}

Scalar read_value(std::istringstream& ls, Field field) {
  double re = 1.0;
  double im = 0.0;
  switch (field) {
    case Field::Pattern:
      break;
    case Field::Real:
    case Field::Integer:
      re = parse_double(ls);
      break;
    case Field::Complex:
      re = parse_double(ls);
      im = parse_double(ls);
      break;
  }
  return make_scalar(re, im);
}

Scalar mirror(Scalar v, Symmetry sym) {
  switch (sym) {
    case Symmetry::General:
    case Symmetry::Symmetric:
      return v;
    case Symmetry::SkewSymmetric:
      return -v;
    case Symmetry::Hermitian:
      return sconj(v);
  }
  return v;
}

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw IoError("matrix market: formatting failed");
  return std::string(buf.data(), ptr);
}

std::string format_scalar(Scalar v) {
  if constexpr (kComplexScalar) {
    return format_double(std::real(v)) + " " + format_double(std::imag(v));
  } else {
    return format_double(std::real(v));
  }
}

}  // namespace

Matrix read_matrix_market(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("matrix market: empty input");
  std::istringstream hs(header);
  std::string banner, object, format, field_s, sym_s;
  hs >> banner >> object >> format >> field_s >> sym_s;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
    throw IoError("matrix market: missing '%%MatrixMarket matrix' banner");
  }
  format = lower(format);
  field_s = lower(field_s);
  sym_s = lower(sym_s);

  Field field;
  if (field_s == "real" || field_s == "double") {
    field = Field::Real;
  } else if (field_s == "integer") {
    field = Field::Integer;
  } else if (field_s == "complex") {
    field = Field::Complex;
  } else if (field_s == "pattern") {
    field = Field::Pattern;
  } else {
    throw IoError("matrix market: unsupported field '" + field_s + "'");
  }

  Symmetry sym;
  if (sym_s == "general") {
    sym = Symmetry::General;
  } else if (sym_s == "symmetric") {
    sym = Symmetry::Symmetric;
  } else if (sym_s == "skew-symmetric") {
    sym = Symmetry::SkewSymmetric;
  } else if (sym_s == "hermitian") {
    sym = Symmetry::Hermitian;
  } else {
    throw IoError("matrix market: unsupported symmetry '" + sym_s + "'");
  }

  std::string line;
  if (!next_data_line(in, line)) throw IoError("matrix market: missing size");
  std::istringstream ss(line);

  if (format == "coordinate") {
    long rows = 0, cols = 0, nnz = 0;
    if (!(ss >> rows >> cols >> nnz) || rows < 0 || cols < 0 || nnz < 0) {
      throw IoError("matrix market: bad coordinate size line");
    }
    Matrix m = Matrix::Zero(rows, cols);
    for (long k = 0; k < nnz; ++k) {
      if (!next_data_line(in, line)) {
        throw IoError("matrix market: fewer entries than declared");
      }
      std::istringstream ls(line);
      long i = 0, j = 0;
      if (!(ls >> i >> j) || i < 1 || j < 1 || i > rows || j > cols) {
        throw IoError("matrix market: bad entry index");
      }
      const Scalar v = read_value(ls, field);
      m(i - 1, j - 1) += v;
      if (sym != Symmetry::General && i != j) m(j - 1, i - 1) += mirror(v, sym);
    }
    return m;
  }

  if (format == "array") {
    if (field == Field::Pattern) {
      throw IoError("matrix market: pattern field is invalid for arrays");
    }
    long rows = 0, cols = 0;
    if (!(ss >> rows >> cols) || rows < 0 || cols < 0) {
      throw IoError("matrix market: bad array size line");
    }
    Matrix m = Matrix::Zero(rows, cols);
    // Column-major; symmetric variants store the lower triangle only
    // (skew-symmetric omits the diagonal).
    for (long j = 0; j < cols; ++j) {
      long first = 0;
      if (sym == Symmetry::Symmetric || sym == Symmetry::Hermitian) first = j;
      if (sym == Symmetry::SkewSymmetric) first = j + 1;
      for (long i = first; i < rows; ++i) {
        if (!next_data_line(in, line)) {
          throw IoError("matrix market: fewer entries than declared");
        }
        std::istringstream ls(line);
        const Scalar v = read_value(ls, field);
        m(i, j) = v;
        if (sym != Symmetry::General && i != j) m(j, i) = mirror(v, sym);
      }
    }
    return m;
  }

  throw IoError("matrix market: unsupported format '" + format + "'");
}

Matrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("matrix market: cannot open " + path.string());
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const Matrix& m,
                         MatrixMarketFormat format) {
  const char* field = kComplexScalar ? "complex" : "real";
  if (format == MatrixMarketFormat::Array) {
    out << "%%MatrixMarket matrix array " << field << " general\n";
    out << m.rows() << " " << m.cols() << "\n";
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        out << format_scalar(m(i, j)) << "\n";
      }
    }
  } else {
    Index nnz = 0;
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != Scalar(0)) ++nnz;
      }
    }
    out << "%%MatrixMarket matrix coordinate " << field << " general\n";
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    for (Index j = 0; j < m.cols(); ++j) {
      for (Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != Scalar(0)) {
          out << (i + 1) << " " << (j + 1) << " " << format_scalar(m(i, j))
              << "\n";
        }
      }
    }
  }
  if (!out) throw IoError("matrix market: write failed");
}

void write_matrix_market(const std::filesystem::path& path, const Matrix& m,
                         MatrixMarketFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("matrix market: cannot open " + path.string());
  write_matrix_market(out, m, format);
}

}  // namespace dhk
