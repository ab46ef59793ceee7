#include "nlpoisson/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nlpoisson/error.hpp"

namespace nlpoisson {

namespace {

[[noreturn]] void fail_line(int line, const std::string& message) {
    throw Error(ErrorCode::Config, "line " + std::to_string(line) + ": " + message);
}

[[noreturn]] void fail_key(const std::string& key, const std::string& message) {
    throw Error(ErrorCode::Config, "key '" + key + "': " + message);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Raw value as written: a scalar token or a list of scalar tokens.
struct RawValue {
    int line = 0;
    bool is_list = false;
    bool quoted = false;
    std::string scalar;
    std::vector<std::string> items;
};

// Strips a trailing comment that is not inside a quoted string.
std::string_view strip_comment(std::string_view line) {
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quote && c == '\\') {
            ++i;
        } else if (c == '"') {
            in_quote = !in_quote;
        } else if (c == '#' && !in_quote) {
            return line.substr(0, i);
        }
    }
    return line;
}

std::string unquote(std::string_view text, int line) {
    std::string out;
    for (std::size_t i = 1; i + 1 < text.size(); ++i) {
        if (text[i] == '\\') {
            if (i + 2 >= text.size()) fail_line(line, "dangling escape in string");
            ++i;
        } else if (text[i] == '"') {
            fail_line(line, "unescaped quote inside string");
        }
        out.push_back(text[i]);
    }
    return out;
}

RawValue parse_value(std::string_view text, int line) {
    RawValue v;
    v.line = line;
    if (text.empty()) fail_line(line, "missing value");
    if (text.front() == '[') {
        if (text.back() != ']') fail_line(line, "unterminated list");
        v.is_list = true;
        std::string_view body = trim(text.substr(1, text.size() - 2));
        if (body.empty()) return v;
        while (true) {
            const auto comma = body.find(',');
            const auto item = trim(body.substr(0, comma));
            if (item.empty()) fail_line(line, "empty list element");
            v.items.emplace_back(item);
            if (comma == std::string_view::npos) break;
            body = body.substr(comma + 1);
        }
        return v;
    }
    if (text.front() == '"') {
        if (text.size() < 2 || text.back() != '"') fail_line(line, "unterminated string");
        v.quoted = true;
        v.scalar = unquote(text, line);
        return v;
    }
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == '[' || c == ']' || c == ',') {
            fail_line(line, "malformed value '" + std::string(text) + "'");
        }
    }
    v.scalar = std::string(text);
    return v;
}

double to_double(const std::string& key, const std::string& text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        fail_key(key, "expected a finite number, got '" + text + "'");
    }
    return value;
}

int to_int(const std::string& key, const std::string& text) {
    int value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) fail_key(key, "expected an integer, got '" + text + "'");
    return value;
}

const std::string& scalar(const std::string& key, const RawValue& v) {
    if (v.is_list) fail_key(key, "expected a single value, got a list");
    return v.scalar;
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

const std::set<std::string> kKnownKernels = {"quadratic", "quartic"};

}  // namespace

const char* command_name(Command command) {
    switch (command) {
        case Command::CheckKernel: return "check-kernel";
        case Command::MassReport: return "mass-report";
        case Command::Solve: return "solve";
        case Command::Study: return "study";
        case Command::Eigen: return "eigen";
    }
    return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
    for (auto c : {Command::CheckKernel, Command::MassReport, Command::Solve, Command::Study, Command::Eigen}) {
        if (text == command_name(c)) return c;
    }
    return std::nullopt;
}

std::vector<double> default_ladder(DomainKind kind) {
    if (kind == DomainKind::Disk) return {0.2, 0.1, 0.05};
    return {0.2, 0.1, 0.05, 0.025};
}

SolveOptions RunConfig::solve_options() const {
    SolveOptions opts;
    opts.relative_residual_tol = tol;
    opts.max_iterations = max_iterations;
    opts.preconditioner = preconditioner;
    return opts;
}

DomainKind RunConfig::domain_kind() const {
    if (domain) return *domain;
    if (problem) return builtin_problem(*problem, mu).domain;
    return DomainKind::Interval;
}

std::vector<double> RunConfig::ladder() const {
    return delta_list.empty() ? default_ladder(domain_kind()) : delta_list;
}

RunConfig parse_config(std::string_view text) {
    std::map<std::string, RawValue> raw;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail_line(line_no, "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) fail_line(line_no, "missing key");
        for (char c : key) {
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
                fail_line(line_no, "invalid key '" + key + "'");
            }
        }
        if (raw.count(key)) fail_line(line_no, "duplicate key '" + key + "'");
        raw.emplace(key, parse_value(trim(line.substr(eq + 1)), line_no));
    }

    RunConfig c;
    for (const auto& [key, v] : raw) {
        if (key == "command") {
            const auto cmd = parse_command(scalar(key, v));
            if (!cmd) fail_key(key, "unknown command '" + v.scalar + "'");
            c.command = cmd;
        } else if (key == "kernel") {
            c.kernel = scalar(key, v);
        } else if (key == "problem") {
            c.problem = scalar(key, v);
        } else if (key == "mu") {
            c.mu = to_double(key, scalar(key, v));
        } else if (key == "delta") {
            c.delta = to_double(key, scalar(key, v));
        } else if (key == "delta_list") {
            if (!v.is_list) fail_key(key, "expected a list [a, b, ...]");
            for (const auto& item : v.items) c.delta_list.push_back(to_double(key, item));
        } else if (key == "ratio") {
            c.ratio = to_double(key, scalar(key, v));
        } else if (key == "formulation") {
            const auto& s = scalar(key, v);
            if (s == "eliminated") c.formulation = Formulation::Eliminated;
            else if (s == "coupled") c.formulation = Formulation::Coupled;
            else fail_key(key, "expected 'eliminated' or 'coupled', got '" + s + "'");
        } else if (key == "tol") {
            c.tol = to_double(key, scalar(key, v));
        } else if (key == "max_iterations") {
            c.max_iterations = to_int(key, scalar(key, v));
        } else if (key == "preconditioner") {
            const auto& s = scalar(key, v);
            if (s == "diagonal") c.preconditioner = Preconditioner::Diagonal;
            else if (s == "none") c.preconditioner = Preconditioner::None;
            else fail_key(key, "expected 'diagonal' or 'none', got '" + s + "'");
        } else if (key == "gradient") {
            const auto& s = scalar(key, v);
            if (s == "interpolant") c.gradient = GradientMode::Interpolant;
            else if (s == "smoothed") c.gradient = GradientMode::Smoothed;
            else fail_key(key, "expected 'interpolant' or 'smoothed', got '" + s + "'");
        } else if (key == "domain") {
            const auto& s = scalar(key, v);
            if (s == "interval") c.domain = DomainKind::Interval;
            else if (s == "disk") c.domain = DomainKind::Disk;
            else fail_key(key, "expected 'interval' or 'disk', got '" + s + "'");
        } else if (key == "resolution") {
            c.resolution = to_int(key, scalar(key, v));
        } else if (key == "eigen_count") {
            c.eigen_count = to_int(key, scalar(key, v));
        } else if (key == "output") {
            c.output = scalar(key, v);
        } else {
            fail_line(v.line, "unknown key '" + key + "'");
        }
    }

    // Semantic validation.
    if (!kKnownKernels.count(c.kernel)) fail_key("kernel", "unknown kernel '" + c.kernel + "'");
    if (c.problem) {
        const auto names = builtin_problem_names();
        if (std::find(names.begin(), names.end(), *c.problem) == names.end()) {
            fail_key("problem", "unknown problem '" + *c.problem + "'");
        }
        if (c.domain && builtin_problem(*c.problem, std::max(c.mu, 0.0)).domain != *c.domain) {
            fail_key("domain", "does not match the domain of problem '" + *c.problem + "'");
        }
    }
    if (!(c.mu >= 0.0)) fail_key("mu", "must be >= 0");
    if (c.delta && !(*c.delta > 0.0)) fail_key("delta", "must be positive");
    for (std::size_t i = 0; i < c.delta_list.size(); ++i) {
        if (!(c.delta_list[i] > 0.0)) fail_key("delta_list", "values must be positive");
        if (i > 0 && !(c.delta_list[i] < c.delta_list[i - 1])) {
            fail_key("delta_list", "δ_list must be strictly decreasing");
        }
    }
    if (!(c.ratio >= kMinCouplingRatio)) {
        fail_key("ratio", "coupling ratio must be >= " + format_double(kMinCouplingRatio));
    }
    if (!(c.tol > 0.0 && c.tol < 1.0)) fail_key("tol", "must lie in (0, 1)");
    if (c.max_iterations && *c.max_iterations < 1) fail_key("max_iterations", "must be >= 1");
    if (c.resolution && *c.resolution < 3) fail_key("resolution", "must be >= 3");
    if (c.eigen_count < 1 || c.eigen_count > 3) fail_key("eigen_count", "must lie in [1, 3]");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string render_config(const RunConfig& c) {
    std::ostringstream out;
    if (c.command) out << "command = " << command_name(*c.command) << '\n';
    out << "kernel = " << c.kernel << '\n';
    if (c.problem) out << "problem = " << *c.problem << '\n';
    out << "mu = " << format_double(c.mu) << '\n';
    if (c.delta) out << "delta = " << format_double(*c.delta) << '\n';
    if (!c.delta_list.empty()) {
        out << "delta_list = [";
        for (std::size_t i = 0; i < c.delta_list.size(); ++i) {
            out << (i ? ", " : "") << format_double(c.delta_list[i]);
        }
        out << "]\n";
    }
    out << "ratio = " << format_double(c.ratio) << '\n';
    out << "formulation = " << formulation_name(c.formulation) << '\n';
    out << "tol = " << format_double(c.tol) << '\n';
    if (c.max_iterations) out << "max_iterations = " << *c.max_iterations << '\n';
    out << "preconditioner = " << (c.preconditioner == Preconditioner::Diagonal ? "diagonal" : "none") << '\n';
    out << "gradient = " << gradient_mode_name(c.gradient) << '\n';
    if (c.domain) out << "domain = " << domain_kind_name(*c.domain) << '\n';
    if (c.resolution) out << "resolution = " << *c.resolution << '\n';
    out << "eigen_count = " << c.eigen_count << '\n';
    if (c.output) out << "output = " << quote(*c.output) << '\n';
    return out.str();
}

void require_for_command(const RunConfig& c, Command command) {
    switch (command) {
        case Command::CheckKernel:
            break;
        case Command::MassReport:
            if (!c.delta) fail_key("delta", "required by mass-report");
            break;
        case Command::Solve:
            if (!c.problem) fail_key("problem", "required by solve");
            if (!c.delta) fail_key("delta", "required by solve");
            break;
        case Command::Study:
            if (!c.problem) fail_key("problem", "required by study");
            if (c.ladder().size() < 3) fail_key("delta_list", "a study needs at least 3 values");
            break;
        case Command::Eigen:
            if (c.domain_kind() != DomainKind::Interval) fail_key("domain", "eigen supports the interval only");
            if (c.ladder().size() < 3) fail_key("delta_list", "an eigen study needs at least 3 values");
            break;
    }
}

}  // namespace nlpoisson
