#include "pwd/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>
#include <vector>

namespace pwd {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& field, const std::string& where) {
    const std::string t = trim(field);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
        throw DataError(where + ": cannot parse \"" + field + "\" as a number");
    return v;
}

}  // namespace

MCDataset read_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line))
        throw DataError(source_name + ": empty input, expected a header row");

    const std::vector<std::string> header = split_fields(line);
    int col_x = -1, col_y = -1, col_id = -1;
    for (size_t c = 0; c < header.size(); ++c) {
        const std::string name = trim(header[c]);
        if (name == "x") col_x = static_cast<int>(c);
        else if (name == "y") col_y = static_cast<int>(c);
        else if (name == "id") col_id = static_cast<int>(c);
    }
    if (col_x < 0 || col_y < 0)
        throw DataError(source_name + ": line 1: header must name columns \"x\" and \"y\"");

    std::vector<int> ids;
    std::vector<double> xs, ys;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        const std::string where = source_name + ": line " + std::to_string(lineno);
        const auto need = std::max(col_x, std::max(col_y, col_id));
        if (static_cast<int>(fields.size()) <= need)
            throw DataError(where + ": expected at least " + std::to_string(need + 1) +
                            " fields, found " + std::to_string(fields.size()));
        xs.push_back(parse_number(fields[static_cast<size_t>(col_x)], where));
        ys.push_back(parse_number(fields[static_cast<size_t>(col_y)], where));
        if (col_id >= 0) {
            const double idv = parse_number(fields[static_cast<size_t>(col_id)], where);
            if (idv != static_cast<int>(idv))
                throw DataError(where + ": id must be an integer");
            ids.push_back(static_cast<int>(idv));
        }
    }
    if (xs.size() < 3) throw DataError(source_name + ": need at least 3 data rows");

    Eigen::VectorXd x = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
    Eigen::VectorXd y = Eigen::Map<Eigen::VectorXd>(ys.data(), static_cast<Eigen::Index>(ys.size()));
    if (col_id >= 0) return {ids, std::move(x), std::move(y)};
    return {std::move(x), std::move(y)};
}

MCDataset read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open input file " + path);
    return read_csv(in, path);
}

}  // namespace pwd
