#include "trslab/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "trslab/errors.hpp"

namespace trslab {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

bool blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

double parseReal(const std::string& tok, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end == tok.c_str() || *end != '\0' || !std::isfinite(v))
    throw ParseError("not a finite real number: '" + tok + "'", line);
  return v;
}

std::size_t parseIndex(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError("not a nonnegative integer: '" + tok + "'", line);
  return v;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

struct Reader {
  std::istream& in;
  std::size_t line = 0;

  // next non-comment, non-blank line; false at end of input
  bool next(std::string& out) {
    while (std::getline(in, out)) {
      ++line;
      if (!out.empty() && out.back() == '\r') out.pop_back();
      if (blank(out) || out[0] == '%') continue;
      return true;
    }
    return false;
  }
};

}  // namespace

SymmetricLinearOperator readMatrixMarket(std::istream& in) {
  Reader rd{in};
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty input", 1);
  rd.line = 1;
  const auto head = tokens(lower(header));
  if (head.size() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix")
    throw ParseError("expected '%%MatrixMarket matrix <format> <field> <symmetry>'", 1);
  const std::string& format = head[2];
  const std::string& field = head[3];
  const std::string& symmetry = head[4];
  if (format != "coordinate" && format != "array")
    throw ParseError("unsupported format '" + format + "'", 1);
  if (field != "real" && field != "integer" && field != "double" &&
      !(field == "pattern" && format == "coordinate"))
    throw ParseError("unsupported field '" + field + "'", 1);
  if (symmetry != "symmetric" && symmetry != "general")
    throw ParseError("unsupported symmetry '" + symmetry + "'", 1);
  const bool symmetricStorage = symmetry == "symmetric";

  std::string text;
  if (!rd.next(text)) throw ParseError("missing size line", rd.line + 1);
  const auto size = tokens(text);
  const std::size_t expectSize = format == "coordinate" ? 3 : 2;
  if (size.size() != expectSize) throw ParseError("malformed size line", rd.line);
  const std::size_t rows = parseIndex(size[0], rd.line);
  const std::size_t cols = parseIndex(size[1], rd.line);
  if (rows != cols) throw ParseError("matrix is not square", rd.line);
  if (rows == 0) throw ParseError("matrix has order 0", rd.line);
  const std::size_t n = rows;

  // (row, col) -> (value, line) with row >= col
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> lowerPart;
  std::map<std::pair<std::size_t, std::size_t>, std::pair<double, std::size_t>> upperPart;

  auto store = [&](std::size_t i, std::size_t j, double v) {
    if (i >= j) {
      auto [it, fresh] = lowerPart.try_emplace({i, j}, v, rd.line);
      if (!fresh) it->second.first += v;
    } else if (symmetricStorage) {
      auto [it, fresh] = lowerPart.try_emplace({j, i}, v, rd.line);
      if (!fresh) it->second.first += v;
    } else {
      auto [it, fresh] = upperPart.try_emplace({i, j}, v, rd.line);
      if (!fresh) it->second.first += v;
    }
  };

  if (format == "coordinate") {
    const std::size_t nnz = parseIndex(size[2], rd.line);
    const std::size_t perLine = field == "pattern" ? 2 : 3;
    for (std::size_t e = 0; e < nnz; ++e) {
      if (!rd.next(text))
        throw ParseError("expected " + std::to_string(nnz) + " entries, found " +
                             std::to_string(e),
                         rd.line + 1);
      const auto tok = tokens(text);
      if (tok.size() != perLine) throw ParseError("malformed entry", rd.line);
      const std::size_t i = parseIndex(tok[0], rd.line);
      const std::size_t j = parseIndex(tok[1], rd.line);
      if (i < 1 || i > n || j < 1 || j > n) throw ParseError("index out of range", rd.line);
      const double v = field == "pattern" ? 1.0 : parseReal(tok[2], rd.line);
      store(i - 1, j - 1, v);
    }
  } else {
    // column-major; symmetric storage lists only the lower triangle
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = symmetricStorage ? j : 0; i < n; ++i) {
        if (!rd.next(text)) throw ParseError("too few array entries", rd.line + 1);
        const auto tok = tokens(text);
        if (tok.size() != 1) throw ParseError("expected one value per line", rd.line);
        store(i, j, parseReal(tok[0], rd.line));
      }
    }
  }
  if (rd.next(text)) throw ParseError("unexpected trailing data", rd.line);

  if (!symmetricStorage) {
    for (const auto& [ij, entry] : upperPart) {
      const auto it = lowerPart.find({ij.second, ij.first});
      const double mirror = it == lowerPart.end() ? 0.0 : it->second.first;
      const double tol = 1e-12 * std::max({1.0, std::abs(entry.first), std::abs(mirror)});
      if (std::abs(entry.first - mirror) > tol)
        throw ParseError("general matrix is not symmetric", entry.second);
    }
    for (const auto& [ij, entry] : lowerPart) {
      if (ij.first == ij.second) continue;
      if (!upperPart.count({ij.second, ij.first}) && entry.first != 0.0)
        throw ParseError("general matrix is not symmetric", entry.second);
    }
  }

  if (format == "array") {
    DenseSymmetric d(n);
    for (const auto& [ij, entry] : lowerPart) d.set(ij.first, ij.second, entry.first);
    return SymmetricLinearOperator::fromDense(std::move(d));
  }
  const bool diagonalOnly = std::all_of(lowerPart.begin(), lowerPart.end(),
                                        [](const auto& kv) { return kv.first.first == kv.first.second; });
  if (diagonalOnly) {
    Vector diag(n, 0.0);
    for (const auto& [ij, entry] : lowerPart) diag[ij.first] = entry.first;
    return SymmetricLinearOperator::fromDiagonal(std::move(diag));
  }
  std::vector<Triplet> trip;
  trip.reserve(lowerPart.size());
  for (const auto& [ij, entry] : lowerPart) trip.push_back({ij.first, ij.second, entry.first});
  return SymmetricLinearOperator::fromTriplets(n, trip);
}

SymmetricLinearOperator readMatrixMarket(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return readMatrixMarket(in);
}

Vector readVector(std::istream& in) {
  Vector out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    for (const auto& tok : tokens(text)) out.push_back(parseReal(tok, line));
  }
  if (out.empty()) throw ParseError("no values found", std::max<std::size_t>(line, 1));
  return out;
}

Vector readVector(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return readVector(in);
}

void writeVector(const std::filesystem::path& path, std::span<const double> v) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  char buf[40];
  for (double x : v) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    out << buf;
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace trslab
