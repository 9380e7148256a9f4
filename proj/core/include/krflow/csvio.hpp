#ifndef KRFLOW_CSVIO_HPP
#define KRFLOW_CSVIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace krflow::csvio {

/// Shortest round-trip decimal representation of a double. Byte-stable for a
/// given platform, so identical runs emit identical files.
std::string format_shortest(double v);

/// Fixed 17-significant-digit representation (profile serialization).
std::string format_sig17(double v);

double parse_double(const std::string& field, const std::string& context);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const; // -1 when absent
};

/// Writes one CSV file; every cell uses the shortest round-trip format unless
/// sig17 is requested.
void write(const std::filesystem::path& path, const std::vector<std::string>& header,
           const std::vector<std::vector<double>>& rows, bool sig17 = false);

/// Reads a numeric CSV with a header line. Throws ParseError on malformed
/// input (wrong arity, non-numeric cells), with a line number.
Table read(const std::filesystem::path& path);

} // namespace krflow::csvio

#endif
