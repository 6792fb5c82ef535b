#include "ggmdir/io.hpp"

#include "ggmdir/errors.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ggmdir {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\"");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\"");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

bool parse_number(const std::string& s, double& x) {
    if (s.empty()) return false;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), x);
    return ec == std::errc() && ptr == s.data() + s.size();
}

int parse_int(const std::string& s, const std::string& what) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw ValidationError("graph shorthand: bad " + what + " '" + s + "'");
    return v;
}

std::vector<std::vector<double>> parse_rows(std::istream& in, bool allow_header) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto toks = split(line, ',');
        std::vector<double> row(toks.size());
        bool numeric = true;
        for (std::size_t c = 0; c < toks.size() && numeric; ++c) numeric = parse_number(toks[c], row[c]);
        if (!numeric) {
            if (allow_header && rows.empty() && width == 0) {
                width = toks.size();
                continue;
            }
            throw ValidationError("line " + std::to_string(line_no) + ": non-numeric entry");
        }
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw ShapeError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                             " columns, found " + std::to_string(row.size()));
        for (double v : row)
            if (!std::isfinite(v)) throw ValidationError("line " + std::to_string(line_no) + ": non-finite entry");
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw ShapeError("no numeric rows");
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
    return m;
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open '" + path.string() + "'");
    return in;
}

json diagnostics_json(const QuadratureDiagnostics& d) {
    return {{"nodes", d.nodes},
            {"panels", d.panels},
            {"max_level", d.max_level},
            {"rel_error", d.rel_error},
            {"tail_fraction", d.tail_fraction}};
}

template <class T>
T field(const json& j, const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string("field '") + key + "': " + e.what());
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

Matrix parse_data_csv(std::istream& in) {
    const Matrix m = to_matrix(parse_rows(in, true));
    return m;
}

Matrix read_data_csv(const fs::path& path) {
    auto in = open_input(path);
    try {
        return parse_data_csv(in);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

SymMatrix read_matrix_csv(const fs::path& path) {
    auto in = open_input(path);
    try {
        const Matrix m = to_matrix(parse_rows(in, false));
        const Matrix sym = 0.5 * (m + m.transpose());
        if (m.rows() != m.cols() || (m - sym).cwiseAbs().maxCoeff() > 1e-12 * m.cwiseAbs().maxCoeff())
            throw ShapeError("matrix is not square and symmetric");
        return SymMatrix(sym);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Graph parse_graph_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("graph JSON: ") + e.what());
    }
    const int q = field<int>(j, "q");
    if (q < 1) throw ValidationError("graph JSON: q must be positive");
    std::vector<Edge> edges;
    for (const auto& pair : field<std::vector<std::vector<int>>>(j, "edges")) {
        if (pair.size() != 2) throw ValidationError("graph JSON: every edge needs two vertices");
        if (pair[0] < 1 || pair[1] < 1 || pair[0] > q || pair[1] > q)
            throw ValidationError("graph JSON: vertex out of range 1.." + std::to_string(q));
        edges.push_back({pair[0] - 1, pair[1] - 1});
    }
    return build_graph(q, edges);
}

std::string graph_to_json(const Graph& g) {
    json edges = json::array();
    for (const auto& [i, j] : g.off_diagonal_edges()) edges.push_back({i + 1, j + 1});
    return json{{"q", g.order()}, {"edges", edges}}.dump();
}

Graph parse_graph_spec(const std::string& spec, const fs::path& base_dir) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    if (colon != std::string::npos && (kind == "md" || kind == "block" || kind == "saturated")) {
        const auto args = split(spec.substr(colon + 1), kind == "md" ? ':' : ',');
        if (kind == "md") {
            if (args.size() != 2) throw ValidationError("graph shorthand: expected md:<q>:<m>, got '" + spec + "'");
            const int q = parse_int(args[0], "q");
            if (q < 1) throw ValidationError("graph shorthand: q must be positive");
            return markov_graph(q, parse_int(args[1], "m"));
        }
        if (kind == "saturated") {
            if (args.size() != 1) throw ValidationError("graph shorthand: expected saturated:<q>");
            const int q = parse_int(args[0], "q");
            if (q < 1) throw ValidationError("graph shorthand: q must be positive");
            return saturated_graph(q);
        }
        std::vector<int> sizes;
        for (const auto& a : args) {
            sizes.push_back(parse_int(a, "block size"));
            if (sizes.back() < 1) throw ValidationError("graph shorthand: block sizes must be positive");
        }
        return block_graph(sizes);
    }
    fs::path path(spec);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    if (!fs::exists(path))
        throw ValidationError("graph '" + spec + "' is neither a shorthand (md:, block:, saturated:) nor a file");
    try {
        return parse_graph_json(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

Scenario parse_scenario(const std::string& text, const fs::path& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario JSON: ") + e.what());
    }
    Scenario s;
    s.q = field<int>(j, "q");
    s.n = field<int>(j, "n");
    s.null_graph = parse_graph_spec(field<std::string>(j, "null"), base_dir);
    s.alt_graph = parse_graph_spec(field<std::string>(j, "alt"), base_dir);
    s.replications = field<long>(j, "reps");
    if (j.contains("seed")) s.base_seed = field<std::uint64_t>(j, "seed");
    if (j.contains("levels")) {
        s.nominal_levels.clear();
        for (double pct : field<std::vector<double>>(j, "levels")) s.nominal_levels.push_back(pct / 100.0);
    }
    if (j.contains("quad_tol")) s.quad.rel_tol = field<double>(j, "quad_tol");
    if (s.null_graph.order() != s.q) throw ShapeError("scenario: null graph order differs from q");
    const auto sigma0 = j.contains("sigma0") ? field<std::string>(j, "sigma0") : std::string("md");
    if (sigma0 == "md" || sigma0 == "block") {
        s.sigma0 = default_null_sigma(s.null_graph, sigma0);
    } else {
        fs::path path(sigma0);
        if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
        s.sigma0 = read_matrix_csv(path);
    }
    s.validate();
    return s;
}

Scenario read_scenario(const fs::path& path) {
    return parse_scenario(read_text_file(path), path.parent_path());
}

std::string report_to_json(const TestReport& r) {
    const json j{{"n", r.n},
                 {"q", r.q},
                 {"d", r.d},
                 {"w", r.w},
                 {"log_gamma", r.log_gamma},
                 {"w_star", r.w_star},
                 {"w_star2", r.w_star2},
                 {"p_lr", r.p_lr},
                 {"p_star", r.p_star},
                 {"p_star2", r.p_star2},
                 {"p_dir", r.p_dir},
                 {"t_max", r.t_max},
                 {"quadrature", diagnostics_json(r.quadrature)},
                 {"degenerate", r.degenerate},
                 {"one_sided", r.one_sided},
                 {"null_iterations", r.null_iterations},
                 {"alt_iterations", r.alt_iterations}};
    return j.dump(2) + "\n";
}

TestReport report_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("report JSON: ") + e.what());
    }
    TestReport r;
    r.n = field<int>(j, "n");
    r.q = field<int>(j, "q");
    r.d = field<int>(j, "d");
    r.w = field<double>(j, "w");
    r.log_gamma = field<double>(j, "log_gamma");
    r.w_star = field<double>(j, "w_star");
    r.w_star2 = field<double>(j, "w_star2");
    r.p_lr = field<double>(j, "p_lr");
    r.p_star = field<double>(j, "p_star");
    r.p_star2 = field<double>(j, "p_star2");
    r.p_dir = field<double>(j, "p_dir");
    r.t_max = field<double>(j, "t_max");
    const auto& qd = field<json>(j, "quadrature");
    r.quadrature.nodes = field<long>(qd, "nodes");
    r.quadrature.panels = field<int>(qd, "panels");
    r.quadrature.max_level = field<int>(qd, "max_level");
    r.quadrature.rel_error = field<double>(qd, "rel_error");
    r.quadrature.tail_fraction = field<double>(qd, "tail_fraction");
    r.degenerate = field<bool>(j, "degenerate");
    r.one_sided = field<bool>(j, "one_sided");
    r.null_iterations = field<int>(j, "null_iterations");
    r.alt_iterations = field<int>(j, "alt_iterations");
    return r;
}

std::string sim_report_csv(const SimReport& report) {
    std::string out = "method";
    for (double a : report.levels) out += "," + format_double(100.0 * a);
    out += "\n";
    for (const auto& row : report.rows) {
        out += row.method;
        for (double v : row.empirical) out += "," + format_double(v);
        out += "\n";
    }
    return out;
}

std::string sim_report_json(const SimReport& report) {
    json levels = json::array();
    for (double a : report.levels) levels.push_back(100.0 * a);
    json rows = json::array();
    for (const auto& row : report.rows)
        rows.push_back({{"method", row.method}, {"empirical", row.empirical}, {"std_error", row.std_error}});
    const json j{{"replications", report.replications},
                 {"failures", report.failures},
                 {"first_failure", report.first_failure},
                 {"levels", levels},
                 {"rows", rows}};
    return j.dump(2) + "\n";
}

std::string relative_error_csv(const std::vector<RelativeErrorRow>& rows) {
    std::string out = "method,nominal,empirical,relative_error\n";
    for (const auto& r : rows)
        out += r.method + "," + format_double(r.nominal) + "," + format_double(r.empirical) + "," +
               format_double(r.relative_error) + "\n";
    return out;
}

std::string read_text_file(const fs::path& path) {
    auto in = open_input(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ValidationError("write to '" + path.string() + "' failed");
}

}  // namespace ggmdir
