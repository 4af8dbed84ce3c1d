// Reproduction-suite runner: executes CLI invocations from a manifest, checks
// extracted values against tolerance-tagged expectations and writes a
// markdown report. Exits nonzero if any check fails.
//
// Manifest: tab-separated, one check per line (# starts a comment):
//   id <TAB> invocation <TAB> extractor <TAB> cmp <TAB> expected <TAB> provenance
// extractor: json:<json-pointer> | csv:<row>:<col>   (row: 0-based after the
//            header, or "last", or "*" for the whole column)
// cmp:       abs:<tol> | rel:<tol> | status:<string> | le | ge | inc | minge

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Check {
    std::string id, invocation, extractor, cmp, expected, provenance;
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<Check> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest " + path);
    std::vector<Check> checks;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto f = split(line, '\t');
        if (f.size() != 6) throw std::runtime_error("manifest line needs 6 fields: " + line);
        checks.push_back({f[0], f[1], f[2], f[3], f[4], f[5]});
    }
    return checks;
}

std::string run_command(const std::string& cmd, int& exit_code) {
    const std::string tmp = "/tmp/eoclab_repro_out.txt";
    const std::string full = cmd + " > " + tmp + " 2> /tmp/eoclab_repro_err.txt";
    exit_code = std::system(full.c_str());
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// returns the extracted values (one, or a whole column for row "*")
std::vector<std::string> extract(const std::string& output, const std::string& extractor) {
    if (extractor.rfind("json:", 0) == 0) {
        const nlohmann::json j = nlohmann::json::parse(output);
        const nlohmann::json v = j.at(nlohmann::json::json_pointer(extractor.substr(5)));
        if (v.is_string()) return {v.get<std::string>()};
        if (v.is_boolean()) return {v.get<bool>() ? "true" : "false"};
        if (v.is_null()) return {"null"};
        return {nlohmann::json(v).dump()};
    }
    if (extractor.rfind("csv:", 0) == 0) {
        const auto parts = split(extractor.substr(4), ':');
        if (parts.size() != 2) throw std::runtime_error("bad csv extractor " + extractor);
        std::vector<std::string> rows;
        std::stringstream ss(output);
        std::string line;
        bool header = true;
        while (std::getline(ss, line)) {
            if (line.empty()) continue;
            if (header) {
                header = false;
                continue;
            }
            rows.push_back(line);
        }
        if (rows.empty()) throw std::runtime_error("no csv rows in output");
        const int col = std::stoi(parts[1]);
        const auto cell = [&](const std::string& row) {
            const auto cells = split(row, ',');
            return cells.at(col);
        };
        if (parts[0] == "*") {
            std::vector<std::string> out;
            out.reserve(rows.size());
            for (const auto& r : rows) out.push_back(cell(r));
            return out;
        }
        const std::size_t idx = parts[0] == "last"
                                    ? rows.size() - 1
                                    : static_cast<std::size_t>(std::stoul(parts[0]));
        return {cell(rows.at(idx))};
    }
    throw std::runtime_error("unknown extractor " + extractor);
}

Outcome compare(const std::vector<std::string>& values, const std::string& cmp,
                const std::string& expected) {
    Outcome out;
    const auto as_num = [](const std::string& s) { return std::stod(s); };
    if (cmp.rfind("status:", 0) == 0) {
        const std::string want = cmp.substr(7);
        out.pass = values.size() == 1 && values[0] == want;
        out.detail = "got '" + values[0] + "', want '" + want + "'";
        return out;
    }
    if (cmp.rfind("abs:", 0) == 0 || cmp.rfind("rel:", 0) == 0) {
        const double tol = as_num(cmp.substr(4));
        const double want = as_num(expected);
        const double got = as_num(values.at(0));
        const double err = cmp[0] == 'a' ? std::abs(got - want)
                                         : std::abs(got - want) / std::abs(want);
        out.pass = err <= tol;
        std::ostringstream os;
        os << "got " << got << ", want " << want << " (" << cmp << ", err " << err << ")";
        out.detail = os.str();
        return out;
    }
    if (cmp == "le" || cmp == "ge") {
        const double want = as_num(expected);
        const double got = as_num(values.at(0));
        out.pass = cmp == "le" ? got <= want : got >= want;
        std::ostringstream os;
        os << "got " << got << (cmp == "le" ? " <= " : " >= ") << want;
        out.detail = os.str();
        return out;
    }
    if (cmp == "inc") {
        out.pass = values.size() >= 2;
        for (std::size_t i = 1; i < values.size() && out.pass; ++i) {
            if (!(as_num(values[i]) > as_num(values[i - 1]))) out.pass = false;
        }
        out.detail = "column of " + std::to_string(values.size()) + " values strictly increasing: " +
                     (out.pass ? "yes" : "no");
        return out;
    }
    if (cmp == "minge") {
        double min = as_num(values.at(0));
        for (const auto& v : values) min = std::min(min, as_num(v));
        out.pass = min >= as_num(expected);
        std::ostringstream os;
        os << "column min " << min << " >= " << expected;
        out.detail = os.str();
        return out;
    }
    throw std::runtime_error("unknown cmp " + cmp);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eoclab reproduction suite"};
    std::string cli_path, manifest_path, out_path = "repro_report.md";
    app.add_option("--cli", cli_path, "path to the eoclab binary")->required();
    app.add_option("--manifest", manifest_path)->required();
    app.add_option("--out", out_path);
    CLI11_PARSE(app, argc, argv);

    std::vector<Check> checks;
    try {
        checks = load_manifest(manifest_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "manifest error: %s\n", e.what());
        return 2;
    }

    std::ofstream report(out_path);
    report << "# Reproduction report\n\n";
    report << "| id | result | provenance | detail |\n|---|---|---|---|\n";

    int failures = 0;
    std::string cached_invocation;
    std::string cached_output;
    int cached_code = 0;
    for (const auto& c : checks) {
        Outcome o;
        try {
            if (c.invocation != cached_invocation) {
                cached_output = run_command(cli_path + " " + c.invocation, cached_code);
                cached_invocation = c.invocation;
            }
            if (cached_code != 0) {
                o.pass = false;
                o.detail = "command exited with " + std::to_string(cached_code);
            } else {
                o = compare(extract(cached_output, c.extractor), c.cmp, c.expected);
            }
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = e.what();
        }
        if (!o.pass) ++failures;
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), o.detail.c_str());
        report << "| " << c.id << " | " << (o.pass ? "pass" : "**FAIL**") << " | " << c.provenance
               << " | " << o.detail << " |\n";
    }
    report << "\n" << (checks.size() - failures) << "/" << checks.size() << " checks passed.\n";
    std::printf("%zu/%zu checks passed (report: %s)\n", checks.size() - failures, checks.size(),
                out_path.c_str());
    return failures == 0 ? 0 : 1;
}
