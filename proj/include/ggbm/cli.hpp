#pragma once

// Command-line front end.  Subcommands:
//   bounds          lower/upper at one (n, p)
//   table           bound table over a range of n or p
//   curve           CSV + SVG of bounds against n or p with reference curves
//   verify          deficit reports for a body pair from a JSON file
//   counterexample  certified violation search on cone pairs
//   asymptotics     large-n remainder table and fitted decay slopes
//
// Exit codes: 0 success (and no violation), 1 certified violation found
// (verify / counterexample), 2 usage error, 3 numeric failure.

#include <string>
#include <vector>

namespace ggbm::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_violation = 1;
inline constexpr int exit_usage = 2;
inline constexpr int exit_numeric = 3;

int run(const std::vector<std::string>& args); // args without argv[0]
int run(int argc, char** argv);

// Formatting helpers shared with tests: fixed CSV conventions ('.' decimal
// separator, ',' field separator, one header row, %.12g values).
std::string format_double(double v);
std::string csv_line(const std::vector<std::string>& fields);

struct SvgSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

// Minimal polyline chart writer (axes, ticks, legend, optional log-log).
void write_svg_chart(const std::string& path, const std::string& title,
                     const std::string& xlabel, const std::string& ylabel,
                     const std::vector<SvgSeries>& series, bool loglog);

} // namespace ggbm::cli
