#include "krflow/csvio.hpp"
#include "krflow/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

namespace krflow::csvio {

std::string format_shortest(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string format_sig17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& field, const std::string& context) {
    double out = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw ParseError(context + ": not a number: '" + field + "'");
    }
    return out;
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows, bool sig17) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << (sig17 ? format_sig17(row[i]) : format_shortest(row[i]));
        }
        out << '\n';
    }
}

static std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open: " + path.string());
    Table table;
    std::string line;
    int lineno = 0;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file");
    ++lineno;
    table.header = split_line(line);
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != table.header.size()) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected " + std::to_string(table.header.size()) +
                             " fields, got " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& f : fields) {
            row.push_back(parse_double(f, path.string() + ":" + std::to_string(lineno)));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace krflow::csvio
