#include "lowrank/matrix_io.hpp"

#include "lowrank/numeric_text.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace lowrank {

namespace {

std::vector<double> parse_csv_line(const std::string& line, const std::string& name,
                                   std::size_t lineno) {
    std::vector<double> row;
    std::string_view rest(line);
    std::string context = name + ":" + std::to_string(lineno);
    while (true) {
        std::size_t comma = rest.find(',');
        std::string_view token = rest.substr(0, comma);
        row.push_back(parse_double(token, context.c_str()));
        if (comma == std::string_view::npos)
            break;
        rest.remove_prefix(comma + 1);
    }
    return row;
}

bool blank(const std::string& line) {
    for (char c : line)
        if (c != ' ' && c != '\t' && c != '\r')
            return false;
    return true;
}

} // namespace

Matrix read_matrix_csv(std::istream& in, const std::string& name) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) {
            if (in.peek() == std::istream::traits_type::eof())
                break;
            throw InputError(name + ":" + std::to_string(lineno) + ": blank line inside matrix");
        }
        rows.push_back(parse_csv_line(line, name, lineno));
        if (rows.back().size() != rows.front().size())
            throw InputError(name + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(rows.front().size()) + " columns, got " +
                             std::to_string(rows.back().size()));
    }
    if (rows.empty())
        throw InputError(name + ": empty matrix file");
    Matrix a(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            a(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    require_finite(a, name.c_str());
    return a;
}

Matrix read_matrix_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open matrix file '" + path + "'");
    return read_matrix_csv(in, path);
}

void write_matrix_csv(std::ostream& out, const Matrix& a) {
    if (a.rows() < 1 || a.cols() < 1)
        throw InputError("write_matrix_csv: matrix must have at least one row and column");
    std::string line;
    for (Index i = 0; i < a.rows(); ++i) {
        line.clear();
        for (Index j = 0; j < a.cols(); ++j) {
            if (j)
                line.push_back(',');
            line += format_double(a(i, j));
        }
        line.push_back('\n');
        out << line;
    }
}

void write_matrix_csv(const std::string& path, const Matrix& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot open '" + path + "' for writing");
    write_matrix_csv(out, a);
    if (!out)
        throw InputError("failed writing matrix to '" + path + "'");
}

} // namespace lowrank
