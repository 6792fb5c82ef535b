#pragma once

// File formats. Vertices are one-based in every external representation.
//
//  data CSV   one row per observation, q numeric columns, optional header
//  graph JSON {"q": 4, "edges": [[2, 1], [3, 2]]}, pairs with i > j
//  shorthand  "md:<q>:<m>", "block:<s1,s2,...>", "saturated:<q>"
//  matrix CSV q rows of q numbers, no header
//  scenario   {"q", "n", "null", "alt", "sigma0", "reps", "seed", "levels"}

#include "ggmdir/dirtest.hpp"
#include "ggmdir/graph.hpp"
#include "ggmdir/simulate.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace ggmdir {

/// Shortest representation that round-trips, at most 17 significant digits.
std::string format_double(double x);

Matrix parse_data_csv(std::istream& in);
Matrix read_data_csv(const std::filesystem::path& path);

SymMatrix read_matrix_csv(const std::filesystem::path& path);

Graph parse_graph_json(const std::string& text);
std::string graph_to_json(const Graph& g);

/// Shorthand when the spec has one of the shorthand prefixes, otherwise a
/// path to a graph JSON file (relative paths resolved against `base_dir`).
Graph parse_graph_spec(const std::string& spec, const std::filesystem::path& base_dir = {});

/// "sigma0" may be "md", "block" or a matrix CSV path; levels are percents.
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario read_scenario(const std::filesystem::path& path);

std::string report_to_json(const TestReport& report);
TestReport report_from_json(const std::string& text);

/// One row per method: method, then the empirical percent at each level.
std::string sim_report_csv(const SimReport& report);
/// Levels, rows, standard errors, failure count and first failure.
std::string sim_report_json(const SimReport& report);
std::string relative_error_csv(const std::vector<RelativeErrorRow>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace ggmdir
