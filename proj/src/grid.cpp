#include "tfd/grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace tfd {

namespace {
std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}
} // namespace

void write_series_csv(const TimeSeries& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t";
    for (int c = 0; c < s.components(); ++c) out << ",v" << c;
    out << "\n";
    for (int j = 0; j < s.grid().nodes(); ++j) {
        out << fmt15(s.grid().node(j));
        for (int c = 0; c < s.components(); ++c) out << "," << fmt15(s.values()(j, c));
        out << "\n";
    }
}

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    if (line.rfind("t,v0", 0) != 0)
        throw std::invalid_argument("series CSV must start with header 't,v0,...': " + path);

    std::vector<std::vector<double>> rows;
    std::vector<double> ts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        if (row.size() < 2) throw std::invalid_argument("bad CSV row: " + line);
        ts.push_back(row[0]);
        row.erase(row.begin());
        rows.push_back(std::move(row));
    }
    if (rows.size() < 3) throw std::invalid_argument("series CSV needs at least 3 rows");
    const int n = static_cast<int>(rows.size()) - 1;
    const double T = ts.back();
    TimeGrid grid(T, n);
    const double h = grid.dt();
    for (int j = 0; j <= n; ++j)
        if (std::abs(ts[j] - grid.node(j)) > 1e-9 * std::max(1.0, T))
            throw std::invalid_argument("series CSV nodes are not a uniform grid on [0,T]");
    (void)h;
    const int nc = static_cast<int>(rows.front().size());
    Eigen::MatrixXd v(n + 1, nc);
    for (int j = 0; j <= n; ++j) {
        if (static_cast<int>(rows[j].size()) != nc)
            throw std::invalid_argument("series CSV has ragged rows");
        for (int c = 0; c < nc; ++c) v(j, c) = rows[j][c];
    }
    return TimeSeries(grid, std::move(v));
}

} // namespace tfd
