#include "randla/matrix_io.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace randla::io {

void write_matrix_market(std::ostream& os, const Matrix& m) {
    os << "%%MatrixMarket matrix array real general\n";
    os << m.rows() << " " << m.cols() << "\n";
    os << std::setprecision(17);
    // Array format is column-major.
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < m.rows(); ++i)
            os << m(i, j) << "\n";
}

Matrix read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line))
        throw IoError("matrix market: empty stream");
    {
        std::istringstream head(line);
        std::string banner, object, format, field, symmetry;
        head >> banner >> object >> format >> field >> symmetry;
        if (banner != "%%MatrixMarket" || object != "matrix" || format != "array" ||
            field != "real" || symmetry != "general")
            throw IoError("matrix market: unsupported header: " + line);
    }
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%')
            break;
    }
    std::istringstream dims(line);
    std::size_t rows = 0, cols = 0;
    if (!(dims >> rows >> cols) || rows == 0 || cols == 0)
        throw IoError("matrix market: bad size line");
    Matrix m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            if (!(is >> m(i, j)))
                throw IoError("matrix market: truncated data");
    m.check_finite();
    return m;
}

void write_matrix_market(const std::string& path, const Matrix& m) {
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open for write: " + path);
    write_matrix_market(f, m);
}

Matrix read_matrix_market(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open for read: " + path);
    return read_matrix_market(f);
}

void write_csv(std::ostream& os, const Matrix& m) {
    os << std::setprecision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j)
                os << ",";
            os << m(i, j);
        }
        os << "\n";
    }
}

Matrix read_csv(std::istream& is) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw IoError("csv: no data");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(i, j) = rows[i][j];
    m.check_finite();
    return m;
}

void write_csv(const std::string& path, const Matrix& m) {
    std::ofstream f(path);
    if (!f)
        throw IoError("cannot open for write: " + path);
    write_csv(f, m);
}

Matrix read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw IoError("cannot open for read: " + path);
    return read_csv(f);
}

} // namespace randla::io
