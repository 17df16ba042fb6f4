#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>

#include "json.hpp"
#include "permbound/matrix.hpp"

namespace permbound {

/// Malformed input file: syntax, ragged rows, or an invariant violation.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class FileFormat { automatic, json, csv };

[[nodiscard]] FileFormat parse_file_format(const std::string& text);

/// What a matrix file held: a block-structured likelihood matrix (JSON with
/// "targets"/"measurements") or a plain nonnegative grid.
using LoadedMatrix = std::variant<LikelihoodMatrix, Matrix>;

[[nodiscard]] LoadedMatrix load_matrix(const std::filesystem::path& path,
                                       FileFormat format = FileFormat::automatic);
[[nodiscard]] LoadedMatrix parse_json_matrix(const std::string& text);
[[nodiscard]] Matrix parse_csv_matrix(const std::string& text);

/// Thin view of a loaded matrix: likelihood and wide grids are transposed.
[[nodiscard]] ThinMatrix as_thin(const LoadedMatrix& m);
/// Wide view (rows = targets): tall grids are transposed.
[[nodiscard]] WideMatrix as_wide(const LoadedMatrix& m);

[[nodiscard]] nlohmann::json matrix_to_json(const Matrix& m);
[[nodiscard]] nlohmann::json matrix_to_json(const LikelihoodMatrix& l);
[[nodiscard]] std::string matrix_to_csv(const Matrix& m);

/// Shortest decimal that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

void save_matrix(const LoadedMatrix& m, const std::filesystem::path& path,
                 FileFormat format = FileFormat::automatic,
                 const nlohmann::json& metadata = nlohmann::json::object());

}  // namespace permbound
