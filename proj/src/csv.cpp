#include "rb/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace rb {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<double> parse_row(const std::string& line, const std::string& name, int row) {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const std::string t = trim(cell);
        if (t.empty()) {
            throw std::runtime_error(name + ": empty cell in row " + std::to_string(row));
        }
        try {
            std::size_t pos = 0;
            double v = std::stod(t, &pos);
            if (pos != t.size()) throw std::invalid_argument(t);
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::runtime_error(name + ": non-numeric cell '" + t + "' in row " +
                                     std::to_string(row));
        }
    }
    return out;
}

Matrix read_numeric_rows(std::istream& in, const std::string& name, bool* saw_returns_header,
                         bool* saw_losses_header) {
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (first) {
            first = false;
            if (t == "returns") {
                if (saw_returns_header) *saw_returns_header = true;
                continue;
            }
            if (t == "losses") {
                if (saw_losses_header) *saw_losses_header = true;
                continue;
            }
        }
        rows.push_back(parse_row(t, name, lineno));
        if (rows.size() > 1 && rows.back().size() != rows.front().size()) {
            throw std::runtime_error(name + ": ragged row " + std::to_string(lineno) + " has " +
                                     std::to_string(rows.back().size()) + " cells, expected " +
                                     std::to_string(rows.front().size()));
        }
    }
    if (rows.empty()) {
        throw std::runtime_error(name + ": no data rows");
    }
    Matrix m(rows.size(), rows.front().size());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
    }
    return m;
}

}  // namespace

ScenarioMatrix read_scenarios(std::istream& in, const std::string& name, CsvConvention fallback) {
    bool returns_header = false, losses_header = false;
    Matrix m = read_numeric_rows(in, name, &returns_header, &losses_header);
    bool negate;
    if (returns_header) {
        negate = true;
    } else if (losses_header) {
        negate = false;
    } else {
        negate = (fallback == CsvConvention::Returns);
    }
    if (negate) m = -m;
    return ScenarioMatrix(std::move(m));
}

ScenarioMatrix load_scenarios(const std::string& path, CsvConvention fallback) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_scenarios: cannot open '" + path + "'");
    }
    return read_scenarios(in, path, fallback);
}

void write_scenarios(const std::string& path, const ScenarioMatrix& sm) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_scenarios: cannot open '" + path + "'");
    }
    out.precision(17);
    out << "losses\n";
    const Matrix& m = sm.xi();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

Vector load_vector(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_vector: cannot open '" + path + "'");
    }
    Matrix m = read_numeric_rows(in, path, nullptr, nullptr);
    if (m.rows() == 1) return m.row(0).transpose();
    if (m.cols() == 1) return m.col(0);
    throw std::runtime_error("load_vector: '" + path + "' is not a single row or column");
}

Matrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_matrix: cannot open '" + path + "'");
    }
    return read_numeric_rows(in, path, nullptr, nullptr);
}

}  // namespace rb
