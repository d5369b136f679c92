#include "slpencil/problem_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

namespace slp {

namespace {

// ---------------------------------------------------------------------------
// A minimal TOML reader covering the problem-file subset: comments, [table]
// headers, key = value with string/bool/number scalars, arrays of numbers and
// arrays of inline tables with numeric fields. Multi-line arrays are joined
// by bracket balance.

struct TomlValue {
    enum class Type { String, Bool, Number, NumberArray, TableArray } type = Type::Number;
    std::string str;
    bool boolean = false;
    double number = 0.0;
    std::vector<double> numbers;
    std::vector<std::map<std::string, double>> tables;
};

using TomlMap = std::map<std::string, TomlValue>;

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& text, int line_no) {
    const std::string t = trim(text);
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": expected a number, got '" + t + "'");
    }
    if (pos != t.size())
        throw ParseError("line " + std::to_string(line_no) + ": trailing characters after number '" + t +
                         "'");
    return v;
}

// Splits on top-level commas (ignoring those inside braces/brackets/strings).
std::vector<std::string> split_top_level(const std::string& text) {
    std::vector<std::string> parts;
    int depth = 0;
    bool in_string = false;
    std::string cur;
    for (char ch : text) {
        if (ch == '"') in_string = !in_string;
        if (!in_string) {
            if (ch == '[' || ch == '{') ++depth;
            if (ch == ']' || ch == '}') --depth;
            if (ch == ',' && depth == 0) {
                parts.push_back(cur);
                cur.clear();
                continue;
            }
        }
        cur += ch;
    }
    if (!trim(cur).empty()) parts.push_back(cur);
    return parts;
}

std::map<std::string, double> parse_inline_table(const std::string& text, int line_no) {
    std::string t = trim(text);
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
        throw ParseError("line " + std::to_string(line_no) + ": expected an inline table");
    std::map<std::string, double> out;
    for (const std::string& item : split_top_level(t.substr(1, t.size() - 2))) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": inline table needs key = value");
        out[trim(item.substr(0, eq))] = parse_number(item.substr(eq + 1), line_no);
    }
    return out;
}

TomlValue parse_value(const std::string& raw, int line_no) {
    const std::string t = trim(raw);
    TomlValue v;
    if (t.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty value");
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"')
            throw ParseError("line " + std::to_string(line_no) + ": unterminated string");
        v.type = TomlValue::Type::String;
        v.str = t.substr(1, t.size() - 2);
        return v;
    }
    if (t == "true" || t == "false") {
        v.type = TomlValue::Type::Bool;
        v.boolean = t == "true";
        return v;
    }
    if (t.front() == '[') {
        if (t.back() != ']')
            throw ParseError("line " + std::to_string(line_no) + ": unterminated array");
        const std::vector<std::string> items = split_top_level(t.substr(1, t.size() - 2));
        if (!items.empty() && trim(items.front()).front() == '{') {
            v.type = TomlValue::Type::TableArray;
            for (const std::string& item : items) v.tables.push_back(parse_inline_table(item, line_no));
        } else {
            v.type = TomlValue::Type::NumberArray;
            for (const std::string& item : items) v.numbers.push_back(parse_number(item, line_no));
        }
        return v;
    }
    v.type = TomlValue::Type::Number;
    v.number = parse_number(t, line_no);
    return v;
}

TomlMap parse_toml(const std::string& text) {
    TomlMap out;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string content = trim(strip_comment(line));
        if (content.empty()) continue;
        if (content.front() == '[') {
            if (content.back() != ']' || content.size() < 3)
                throw ParseError("line " + std::to_string(line_no) + ": malformed table header");
            section = trim(content.substr(1, content.size() - 2));
            if (section.empty() || section.front() == '[')
                throw ParseError("line " + std::to_string(line_no) + ": unsupported table header");
            continue;
        }
        const std::size_t eq = content.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(content.substr(0, eq));
        std::string value = trim(content.substr(eq + 1));
        // join continued lines of a multi-line array
        const auto balance = [](const std::string& s) {
            int d = 0;
            for (char ch : s) {
                if (ch == '[' || ch == '{') ++d;
                if (ch == ']' || ch == '}') --d;
            }
            return d;
        };
        while (balance(value) > 0 && std::getline(in, line)) {
            ++line_no;
            value += " " + trim(strip_comment(line));
        }
        const std::string full_key = section.empty() ? key : section + "." + key;
        if (out.count(full_key))
            throw ParseError("line " + std::to_string(line_no) + ": duplicate key '" + full_key + "'");
        out[full_key] = parse_value(value, line_no);
    }
    return out;
}

// ---------------------------------------------------------------------------

RationalHN hn_from_toml(const TomlMap& map, std::set<std::string>& consumed, const std::string& name) {
    const auto root = map.find(name);
    if (root != map.end()) {
        consumed.insert(name);
        if (root->second.type != TomlValue::Type::String || root->second.str != "infinity")
            throw ParseError("'" + name + "' must be the string \"infinity\" or a table");
        return RationalHN::infinity();
    }
    const auto inf_marker = map.find(name + ".infinity");
    if (inf_marker != map.end()) {
        consumed.insert(name + ".infinity");
        if (inf_marker->second.type != TomlValue::Type::Bool || !inf_marker->second.boolean)
            throw ParseError("'" + name + ".infinity' must be true when present");
        return RationalHN::infinity();
    }
    double h0 = 0.0;
    double h = 0.0;
    std::vector<Pole> poles;
    bool any = false;
    if (const auto it = map.find(name + ".h0"); it != map.end()) {
        consumed.insert(name + ".h0");
        if (it->second.type != TomlValue::Type::Number) throw ParseError("'" + name + ".h0' must be a number");
        h0 = it->second.number;
        any = true;
    }
    if (const auto it = map.find(name + ".h"); it != map.end()) {
        consumed.insert(name + ".h");
        if (it->second.type != TomlValue::Type::Number) throw ParseError("'" + name + ".h' must be a number");
        h = it->second.number;
        any = true;
    }
    if (const auto it = map.find(name + ".poles"); it != map.end()) {
        consumed.insert(name + ".poles");
        if (it->second.type != TomlValue::Type::TableArray)
            throw ParseError("'" + name + ".poles' must be an array of {h, delta} tables");
        for (const auto& tab : it->second.tables) {
            Pole p;
            for (const auto& [k, v] : tab) {
                if (k == "h")
                    p.h = v;
                else if (k == "delta")
                    p.delta = v;
                else
                    throw ParseError("unknown key '" + k + "' in '" + name + ".poles'");
            }
            poles.push_back(p);
        }
        any = true;
    }
    if (!any) throw ParseError("boundary function '" + name + "' is missing");
    return RationalHN(h0, h, std::move(poles));
}

std::string format17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

std::function<double(double)> parse_sigma_expression(const std::string& text) {
    struct Term {
        double coef = 1.0;
        enum class Kind { Cos, Sin, Power, Const } kind = Term::Kind::Const;
        int k = 1; // frequency or power
    };
    std::vector<Term> terms;

    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    const auto read_number = [&]() -> double {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(text.substr(i), &pos);
        } catch (const std::exception&) {
            throw ParseError("sigma expression: expected a number at position " + std::to_string(i));
        }
        i += pos;
        return v;
    };
    const auto read_int = [&]() -> int {
        const double v = read_number();
        const int k = static_cast<int>(std::lround(v));
        if (std::abs(v - k) > 1e-12 || k < 0)
            throw ParseError("sigma expression: expected a nonnegative integer");
        return k;
    };

    skip_ws();
    bool first = true;
    while (i < text.size()) {
        double sign = 1.0;
        skip_ws();
        if (!first || (i < text.size() && (text[i] == '+' || text[i] == '-'))) {
            if (i >= text.size() || (text[i] != '+' && text[i] != '-'))
                throw ParseError("sigma expression: expected '+' or '-' between terms");
            sign = text[i] == '-' ? -1.0 : 1.0;
            ++i;
            skip_ws();
        }
        first = false;

        Term term;
        term.coef = sign;
        bool have_coef = false;
        if (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '.')) {
            term.coef *= read_number();
            have_coef = true;
            skip_ws();
            if (i < text.size() && text[i] == '*') {
                ++i;
                skip_ws();
            } else {
                // bare constant
                term.kind = Term::Kind::Const;
                terms.push_back(term);
                skip_ws();
                continue;
            }
        }
        (void)have_coef;

        if (text.compare(i, 4, "cos(") == 0 || text.compare(i, 4, "sin(") == 0) {
            term.kind = text[i] == 'c' ? Term::Kind::Cos : Term::Kind::Sin;
            i += 4;
            skip_ws();
            term.k = 1;
            if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                term.k = read_int();
                skip_ws();
                if (i < text.size() && text[i] == '*') {
                    ++i;
                    skip_ws();
                }
            }
            if (text.compare(i, 1, "x") != 0)
                throw ParseError("sigma expression: trig argument must be x or k*x");
            ++i;
            skip_ws();
            if (i >= text.size() || text[i] != ')')
                throw ParseError("sigma expression: missing ')'");
            ++i;
        } else if (i < text.size() && text[i] == 'x') {
            ++i;
            term.kind = Term::Kind::Power;
            term.k = 1;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip_ws();
                term.k = read_int();
            }
        } else {
            throw ParseError("sigma expression: unknown term at position " + std::to_string(i));
        }
        terms.push_back(term);
        skip_ws();
    }
    if (terms.empty()) throw ParseError("sigma expression: empty");

    return [terms](double x) {
        double v = 0.0;
        for (const Term& t : terms) {
            switch (t.kind) {
            case Term::Kind::Cos: v += t.coef * std::cos(t.k * x); break;
            case Term::Kind::Sin: v += t.coef * std::sin(t.k * x); break;
            case Term::Kind::Power: v += t.coef * std::pow(x, t.k); break;
            case Term::Kind::Const: v += t.coef; break;
            }
        }
        return v;
    };
}

ProblemFile parse_problem_text(const std::string& text) {
    const TomlMap map = parse_toml(text);
    std::set<std::string> consumed;
    ProblemFile file;

    if (const auto it = map.find("sigma.expression"); it != map.end()) {
        consumed.insert("sigma.expression");
        if (it->second.type != TomlValue::Type::String)
            throw ParseError("'sigma.expression' must be a string");
        file.sigma_expression = it->second.str;
        parse_sigma_expression(file.sigma_expression); // validate now
    }
    if (const auto it = map.find("sigma.values"); it != map.end()) {
        consumed.insert("sigma.values");
        if (it->second.type != TomlValue::Type::NumberArray)
            throw ParseError("'sigma.values' must be an array of numbers");
        file.sigma_values = it->second.numbers;
    }
    if (file.sigma_expression.empty() == file.sigma_values.empty())
        throw ParseError("sigma needs exactly one of 'expression' or 'values'");

    file.f = hn_from_toml(map, consumed, "f");
    file.F = hn_from_toml(map, consumed, "F");

    if (const auto it = map.find("solver.grid_size"); it != map.end()) {
        consumed.insert("solver.grid_size");
        file.solver.grid_size = static_cast<int>(it->second.number);
    }
    if (const auto it = map.find("solver.n_max"); it != map.end()) {
        consumed.insert("solver.n_max");
        file.solver.n_max = static_cast<int>(it->second.number);
    }

    if (const auto it = map.find("experiment.m_list"); it != map.end()) {
        consumed.insert("experiment.m_list");
        file.experiment.present = true;
        for (double v : it->second.numbers) file.experiment.m_list.push_back(static_cast<int>(v));
    }
    if (const auto it = map.find("experiment.alpha1"); it != map.end()) {
        consumed.insert("experiment.alpha1");
        file.experiment.present = true;
        file.experiment.alpha1 = it->second.number;
    }
    if (const auto it = map.find("experiment.alpha2"); it != map.end()) {
        consumed.insert("experiment.alpha2");
        file.experiment.present = true;
        file.experiment.alpha2 = it->second.number;
    }
    if (const auto it = map.find("experiment.eps_list"); it != map.end()) {
        consumed.insert("experiment.eps_list");
        file.experiment.present = true;
        file.experiment.eps_list = it->second.numbers;
    }
    if (const auto it = map.find("experiment.seed"); it != map.end()) {
        consumed.insert("experiment.seed");
        file.experiment.present = true;
        file.experiment.seed = static_cast<std::uint64_t>(it->second.number);
    }

    for (const auto& [key, value] : map) {
        (void)value;
        if (!consumed.count(key)) throw ParseError("unknown key '" + key + "' in problem file");
    }
    return file;
}

ProblemFile load_problem_file(const std::string& path) { return parse_problem_text(read_text_file(path)); }

Problem build_problem(const ProblemFile& file, int grid_size_override) {
    const int G = grid_size_override > 0 ? grid_size_override : file.solver.grid_size;
    MeanZeroFunction sigma(G);
    if (!file.sigma_expression.empty()) {
        sigma = MeanZeroFunction::sample(parse_sigma_expression(file.sigma_expression), G);
    } else {
        const int G_in = static_cast<int>(file.sigma_values.size()) - 1;
        if (G_in == G) {
            sigma = MeanZeroFunction::project(file.sigma_values);
        } else {
            // linear resample onto the target grid
            std::vector<double> vals(static_cast<std::size_t>(G) + 1);
            for (int i = 0; i <= G; ++i) {
                const double t = static_cast<double>(i) * G_in / G;
                const int j = std::min(static_cast<int>(t), G_in - 1);
                const double frac = t - j;
                vals[static_cast<std::size_t>(i)] =
                    (1.0 - frac) * file.sigma_values[static_cast<std::size_t>(j)] +
                    frac * file.sigma_values[static_cast<std::size_t>(j + 1)];
            }
            sigma = MeanZeroFunction::project(std::move(vals));
        }
    }
    return Problem{std::move(sigma), file.f, file.F};
}

namespace {

void format_hn(std::ostringstream& out, const std::string& name, const RationalHN& f) {
    if (f.is_infinity()) {
        out << name << " = \"infinity\"\n";
        return;
    }
    out << "[" << name << "]\n";
    out << "h0 = " << format17(f.h0()) << "\n";
    out << "h = " << format17(f.h()) << "\n";
    if (!f.poles().empty()) {
        out << "poles = [";
        for (std::size_t j = 0; j < f.poles().size(); ++j) {
            if (j) out << ", ";
            out << "{h = " << format17(f.poles()[j].h) << ", delta = " << format17(f.poles()[j].delta)
                << "}";
        }
        out << "]\n";
    }
}

} // namespace

std::string format_problem(const Problem& P, const SolverSpec& solver) {
    std::ostringstream out;
    // root-level infinity markers must precede any [table]
    if (P.f.is_infinity()) out << "f = \"infinity\"\n";
    if (P.F.is_infinity()) out << "F = \"infinity\"\n";
    out << "[sigma]\n";
    out << "values = [";
    for (int i = 0; i <= P.sigma.grid_size(); ++i) {
        if (i) out << ", ";
        out << format17(P.sigma.value(i));
    }
    out << "]\n";
    if (!P.f.is_infinity()) format_hn(out, "f", P.f);
    if (!P.F.is_infinity()) format_hn(out, "F", P.F);
    out << "[solver]\n";
    out << "grid_size = " << P.sigma.grid_size() << "\n";
    out << "n_max = " << solver.n_max << "\n";
    return out.str();
}

void write_problem_file(const std::string& path, const Problem& P, const SolverSpec& solver) {
    write_text_file(path, format_problem(P, solver));
}

std::string format_spectral_json(const SpectralData& S) {
    std::ostringstream out;
    out << "{\n  \"M\": " << S.M() << ",\n  \"N\": " << S.N() << ",\n  \"pairs\": [\n";
    for (int n = 1; n <= S.size(); ++n) {
        out << "    {\"n\": " << n << ", \"lambda\": " << format17(S.lambda_n(n))
            << ", \"gamma\": " << format17(S.gamma_n(n)) << ", \"kappa\": " << format17(S.kappa_n(n))
            << ", \"beta\": " << format17(S.beta_n(n)) << "}";
        if (n < S.size()) out << ",";
        out << "\n";
    }
    out << "  ]\n}\n";
    return out.str();
}

void write_spectral_json(const std::string& path, const SpectralData& S) {
    write_text_file(path, format_spectral_json(S));
}

SpectralData parse_spectral_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spectral data JSON: ") + e.what());
    }
    if (!j.contains("M") || !j.contains("N") || !j.contains("pairs"))
        throw ParseError("spectral data JSON: need M, N and pairs");
    std::vector<SpectralPair> pairs;
    int expected = 1;
    for (const auto& item : j["pairs"]) {
        if (!item.contains("lambda") || !item.contains("gamma"))
            throw ParseError("spectral data JSON: each pair needs lambda and gamma");
        if (item.contains("n") && item["n"].get<int>() != expected)
            throw ParseError("spectral data JSON: pairs must be listed as n = 1, 2, ...");
        pairs.push_back({item["lambda"].get<double>(), item["gamma"].get<double>()});
        ++expected;
    }
    SpectralData S(j["M"].get<int>(), j["N"].get<int>(), std::move(pairs));
    S.validate();
    return S;
}

SpectralData load_spectral_json(const std::string& path) {
    return parse_spectral_json(read_text_file(path));
}

std::string csv_number(double v) { return format17(v); }

std::string format_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ",";
        out << header[i];
    }
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
    return out.str();
}

} // namespace slp
