#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace qsd::csv {

// 17 significant digits: enough for exact double round-trips, keeping file
// hashes stable for identical runs.
inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void header(std::ostream& os, const std::string& schema,
                   const std::vector<std::string>& cols) {
    os << "# schema: " << schema << "\n";
    for (size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << "\n";
}

inline void row(std::ostream& os, const std::vector<double>& vals) {
    for (size_t i = 0; i < vals.size(); ++i) os << (i ? "," : "") << num(vals[i]);
    os << "\n";
}

}  // namespace qsd::csv
