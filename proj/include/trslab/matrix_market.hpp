#pragma once

#include <filesystem>
#include <iosfwd>

#include "trslab/linalg.hpp"

namespace trslab {

/// Reads a symmetric matrix in Matrix Market format: coordinate
/// (real | integer | pattern; symmetric | general) or array (real | integer;
/// symmetric | general). "general" inputs must be numerically symmetric.
/// Diagonal-only inputs come back with diagonal storage, arrays with dense
/// storage, everything else sparse. Throws ParseError (with line number).
SymmetricLinearOperator readMatrixMarket(std::istream& in);
SymmetricLinearOperator readMatrixMarket(const std::filesystem::path& path);

/// Whitespace-separated reals. Throws ParseError.
Vector readVector(std::istream& in);
Vector readVector(const std::filesystem::path& path);

/// One value per line at full precision. Throws IoError.
void writeVector(const std::filesystem::path& path, std::span<const double> v);

}  // namespace trslab
