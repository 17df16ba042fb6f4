#include "permbound/matrix_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace permbound {

namespace {

using nlohmann::json;

FileFormat resolve(FileFormat format, const std::filesystem::path& path) {
    if (format != FileFormat::automatic) return format;
    return path.extension() == ".csv" ? FileFormat::csv : FileFormat::json;
}

std::size_t require_count(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
    const json& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(std::string("field \"") + key + "\" must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

Matrix parse_data(const json& doc) {
    const std::size_t rows = require_count(doc, "rows");
    const std::size_t cols = require_count(doc, "cols");
    if (!doc.contains("data") || !doc.at("data").is_array()) {
        throw ParseError("missing array field \"data\"");
    }
    const json& data = doc.at("data");
    if (data.size() != rows) {
        throw ParseError("\"data\" has " + std::to_string(data.size()) + " rows, expected " +
                         std::to_string(rows));
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = data[i];
        if (!row.is_array() || row.size() != cols) {
            throw ParseError("data row " + std::to_string(i) + " must have " +
                             std::to_string(cols) + " entries");
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (!row[j].is_number()) {
                throw ParseError("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") is not a number");
            }
            m(i, j) = row[j].get<double>();
        }
    }
    return m;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

FileFormat parse_file_format(const std::string& text) {
    if (text == "auto") return FileFormat::automatic;
    if (text == "json") return FileFormat::json;
    if (text == "csv") return FileFormat::csv;
    throw std::invalid_argument("unknown format '" + text + "' (expected auto, json or csv)");
}

LoadedMatrix parse_json_matrix(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("JSON syntax error at byte ") + std::to_string(e.byte) +
                         ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError("top-level JSON value must be an object");

    Matrix m = parse_data(doc);
    try {
        if (doc.contains("targets") || doc.contains("measurements")) {
            const std::size_t t = require_count(doc, "targets");
            const std::size_t meas = require_count(doc, "measurements");
            return LikelihoodMatrix(t, meas, std::move(m));
        }
        require_nonnegative_finite(m, "matrix");
    } catch (const MatrixError& e) {
        throw ParseError(e.what());
    }
    return m;
}

Matrix parse_csv_matrix(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::vector<double> row;
        std::size_t col = 0;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = line.find(',', pos);
            std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                            : comma - pos);
            const auto first = cell.find_first_not_of(" \t");
            const auto last = cell.find_last_not_of(" \t");
            cell = first == std::string::npos ? std::string() : cell.substr(first, last - first + 1);

            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
                throw ParseError("CSV line " + std::to_string(line_no) + ", column " +
                                 std::to_string(col + 1) + ": '" + cell + "' is not a number");
            }
            row.push_back(v);
            ++col;
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError("CSV line " + std::to_string(line_no) + " has " +
                             std::to_string(row.size()) + " fields, expected " +
                             std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    Matrix m = Matrix::from_rows(rows);
    try {
        require_nonnegative_finite(m, "matrix");
    } catch (const MatrixError& e) {
        throw ParseError(e.what());
    }
    return m;
}

LoadedMatrix load_matrix(const std::filesystem::path& path, FileFormat format) {
    const std::string text = read_file(path);
    if (resolve(format, path) == FileFormat::csv) return parse_csv_matrix(text);
    return parse_json_matrix(text);
}

ThinMatrix as_thin(const LoadedMatrix& m) {
    if (const auto* l = std::get_if<LikelihoodMatrix>(&m)) return to_thin(*l);
    const Matrix& g = std::get<Matrix>(m);
    return g.rows() >= g.cols() ? ThinMatrix(g) : ThinMatrix(g.transpose());
}

WideMatrix as_wide(const LoadedMatrix& m) {
    if (const auto* l = std::get_if<LikelihoodMatrix>(&m)) return l->wide();
    const Matrix& g = std::get<Matrix>(m);
    return g.rows() <= g.cols() ? WideMatrix(g) : WideMatrix(g.transpose());
}

nlohmann::json matrix_to_json(const Matrix& m) {
    json data = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        data.push_back(json(std::vector<double>(m.row(i).begin(), m.row(i).end())));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

nlohmann::json matrix_to_json(const LikelihoodMatrix& l) {
    json doc = matrix_to_json(l.matrix());
    doc["targets"] = l.num_targets();
    doc["measurements"] = l.num_measurements();
    return doc;
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string matrix_to_csv(const Matrix& m) {
    std::string out;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += format_double(m(i, j));
        }
        out += '\n';
    }
    return out;
}

void save_matrix(const LoadedMatrix& m, const std::filesystem::path& path, FileFormat format,
                 const nlohmann::json& metadata) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (resolve(format, path) == FileFormat::csv) {
        const Matrix& grid = std::holds_alternative<LikelihoodMatrix>(m)
                                 ? std::get<LikelihoodMatrix>(m).matrix()
                                 : std::get<Matrix>(m);
        out << matrix_to_csv(grid);
        return;
    }
    json doc = std::visit([](const auto& x) { return matrix_to_json(x); }, m);
    for (const auto& [k, v] : metadata.items()) doc[k] = v;
    out << doc.dump(2) << '\n';
}

}  // namespace permbound
