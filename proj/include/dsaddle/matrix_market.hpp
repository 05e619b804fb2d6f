#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "dsaddle/block_system.hpp"

namespace dsaddle {

/// Reads a dense real matrix from Matrix Market text. Accepts the array and
/// coordinate layouts with real, double or integer fields and the general,
/// symmetric and skew-symmetric qualifiers. Throws DataError on anything
/// else.
Matrix read_matrix_market(std::istream& in);
Matrix read_matrix_market(const std::filesystem::path& path);

/// Writes "array real general" with round-trip precision.
void write_matrix_market(std::ostream& out, const Matrix& m,
                         std::string_view comment = {});
void write_matrix_market(const std::filesystem::path& path, const Matrix& m,
                         std::string_view comment = {});

/// Loads A.mtx, B.mtx, C.mtx and, when present, D.mtx and E.mtx from dir.
/// Missing D or E files mean zero blocks.
BlockSystem load_block_system(const std::filesystem::path& dir,
                              const ToleranceConfig& tol = {});

/// Writes all five blocks as A.mtx ... E.mtx.
void save_block_system(const std::filesystem::path& dir,
                       const BlockSystem& sys);

}  // namespace dsaddle
