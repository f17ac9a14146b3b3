#include "shannon_markov/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "shannon_markov/errors.hpp"
#include "shannon_markov/fejer.hpp"
#include "shannon_markov/format.hpp"
#include "shannon_markov/redundancy.hpp"
#include "shannon_markov/source_io.hpp"

namespace shannon_markov {

namespace {

using nlohmann::json;
using Cell = Table::Cell;

Cell optional_int(const std::optional<std::int64_t>& v) {
    return v ? Cell(*v) : Cell();
}

// Appends the flags of `b` missing from `a`; both are ';'-separated.
std::string join_flags(std::string a, const std::string& b) {
    std::size_t pos = 0;
    while (pos < b.size()) {
        std::size_t end = std::min(b.find(';', pos), b.size());
        const std::string flag = b.substr(pos, end - pos);
        if ((";" + a + ";").find(";" + flag + ";") == std::string::npos) a += (a.empty() ? "" : ";") + flag;
        pos = end + 1;
    }
    return a;
}

struct Session {
    const RunConfig& config;
    ResourceLimits limits;
    json config_doc;

    explicit Session(const RunConfig& c) : config(c) {
        if (!c.config_path.empty()) {
            config_doc = load_json_file(c.config_path);
            if (config_doc.contains("limits")) limits = parse_limits(config_doc["limits"]);
        }
    }
};

MarkovSource require_source(const RunConfig& config) {
    if (config.source_path.empty()) throw ValidationError("--source is required for command '" + config.command + "'");
    auto source = load_source(config.source_path);
    require_valid(source);
    return source;
}

ClassifyOptions classify_options(const RunConfig& config) {
    ClassifyOptions o;
    o.anchor = config.anchor;
    o.m_max = config.m_max;
    return o;
}

std::vector<std::string> prediction_columns() {
    return {"n", "mode", "M", "omega", "lower", "upper", "boundary_terms", "flags"};
}

std::vector<Cell> prediction_cells(const Prediction& p, const std::string& extra_flags = "") {
    return {Cell(static_cast<std::int64_t>(p.n)), Cell(to_string(p.mode)), optional_int(p.M), Cell(p.omega),
            Cell(p.lower), Cell(p.upper), Cell(p.boundary_terms), Cell(join_flags(p.flags(), extra_flags))};
}

// Compare rows: prediction columns, then the exact value, its method and the gap.
void append_compare_rows(Table& table, const MarkovSource& source, const Session& session,
                         const std::vector<Cell>& prefix) {
    const auto& c = session.config;
    auto cls = classify_mode(source, classify_options(c));
    for (int n = c.n_first; n <= c.n_last; ++n) {
        auto pred = predict(source, cls, n, c.xi);
        auto exact = exact_redundancy(source, n, parse_strategy(c.strategy), session.limits);
        std::vector<Cell> row = prefix;
        auto cells = prediction_cells(pred, exact.snapped ? "snap" : "");
        Cell flags = cells.back();
        cells.pop_back();
        row.insert(row.end(), cells.begin(), cells.end());
        row.push_back(Cell(exact.value));
        row.push_back(Cell(to_string(exact.method)));
        row.push_back(Cell(std::fabs(exact.value - pred.omega)));
        row.push_back(flags);
        table.rows.push_back(std::move(row));
    }
}

std::vector<std::string> compare_columns() {
    return {"n", "mode", "M", "omega", "lower", "upper", "boundary_terms", "exact", "method", "abs_diff", "flags"};
}

json classify_report(const MarkovSource& source, const RunConfig& config) {
    json doc;
    doc["source"] = source_to_json(source);
    auto structure = classify_structure(source);
    doc["structure"] = to_json(structure);
    if (!structure.irreducible) {
        doc["classification"] = nullptr;
        doc["note"] = "mode classification requires an irreducible chain";
        return doc;
    }
    auto cls = classify_mode(source, classify_options(config));
    doc["classification"] = to_json(cls);
    const std::int64_t m = cls.M.value_or(0);
    json spectral;
    spectral["m"] = m;
    try {
        spectral["report"] = to_json(eigen(build_A(source, m).entries));
    } catch (const DefectiveMatrix& e) {
        spectral["report"] = nullptr;
        spectral["error"] = e.what();
    }
    doc["spectral"] = spectral;
    return doc;
}

Table fejer_table(const RunConfig& c) {
    if (c.grid < 2) throw ValidationError("--grid must be at least 2");
    const auto fn = parse_sandwich_fn(c.fn);
    const double bound = error_bound(c.order, c.theta);
    Table t{{"u", "f", "fejer_sum", "bound"}, {}};
    for (int i = 0; i < c.grid; ++i) {
        const double u = static_cast<double>(i) / (c.grid - 1);
        t.rows.push_back(
            {Cell(u), Cell(evaluate(fn, u, c.theta)), Cell(fejer_sum(fn, u, c.theta, c.order)), Cell(bound)});
    }
    return t;
}

std::string sweep_label(const json& entry, std::size_t index) {
    if (entry.is_string()) return entry.get<std::string>();
    if (entry.is_object() && entry.contains("label")) return entry["label"].get<std::string>();
    return "source" + std::to_string(index + 1);
}

Table sweep_table(const Session& session) {
    const auto& doc = session.config_doc;
    if (!doc.contains("sweep") || !doc["sweep"].contains("sources"))
        throw ValidationError("sweep needs a config file with a \"sweep\": {\"sources\": [...]} section");
    const auto& entries = doc["sweep"]["sources"];
    if (!entries.is_array()) throw ParseError("\"sweep.sources\" must be an array");
    const auto base = std::filesystem::path(session.config.config_path).parent_path();

    Table t;
    t.columns = compare_columns();
    t.columns.insert(t.columns.begin(), "source");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& entry = entries[i];
        auto load_relative = [&](const std::string& path) {
            std::filesystem::path p(path);
            return load_source((p.is_absolute() ? p : base / p).string());
        };
        MarkovSource source = [&] {
            if (entry.is_string()) return load_relative(entry.get<std::string>());
            if (entry.is_object() && entry.contains("source")) {
                const auto& inner = entry["source"];
                return inner.is_string() ? load_relative(inner.get<std::string>()) : parse_source(inner);
            }
            throw ParseError("sweep entries must be paths or {\"label\", \"source\"} objects; \"source\" is a path or an inline source");
        }();
        require_valid(source);
        append_compare_rows(t, source, session, {Cell(sweep_label(entry, i))});
    }
    return t;
}

void emit(std::ostream& out, const RunConfig& config, const Table& table) {
    if (config.format == "json")
        out << to_json(table).dump(2) << '\n';
    else
        write_csv(out, table);
}

int run_command(const RunConfig& c, std::ostream& out) {
    if (c.format != "csv" && c.format != "json") throw ValidationError("--format must be csv or json");
    if (c.n_first < 1 || c.n_last < c.n_first) throw ValidationError("--n must be a nonempty range of positive integers");
    if (!(c.xi > 0.0 && c.xi < 0.5)) throw ValidationError("--xi must lie in (0, 1/2)");
    Session session(c);

    if (c.command == "classify") {
        out << classify_report(require_source(c), c).dump(2) << '\n';
        return kExitOk;
    }
    if (c.command == "predict") {
        auto source = require_source(c);
        auto cls = classify_mode(source, classify_options(c));
        Table t{prediction_columns(), {}};
        for (int n = c.n_first; n <= c.n_last; ++n) t.rows.push_back(prediction_cells(predict(source, cls, n, c.xi)));
        emit(out, c, t);
        return kExitOk;
    }
    if (c.command == "exact") {
        auto source = require_source(c);
        Table t{{"n", "method", "value", "stderr"}, {}};
        for (int n = c.n_first; n <= c.n_last; ++n) {
            auto v = exact_redundancy(source, n, parse_strategy(c.strategy), session.limits);
            t.rows.push_back({Cell(static_cast<std::int64_t>(n)), Cell(to_string(v.method)), Cell(v.value), Cell()});
            if (c.samples > 0) {
                auto mc = monte_carlo_redundancy(source, n, c.samples, c.seed);
                t.rows.push_back({Cell(static_cast<std::int64_t>(n)), Cell(to_string(mc.method)), Cell(mc.value),
                                  Cell(*mc.std_error)});
            }
        }
        emit(out, c, t);
        return kExitOk;
    }
    if (c.command == "compare") {
        auto source = require_source(c);
        Table t{compare_columns(), {}};
        append_compare_rows(t, source, session, {});
        emit(out, c, t);
        return kExitOk;
    }
    if (c.command == "sweep") {
        emit(out, c, sweep_table(session));
        return kExitOk;
    }
    if (c.command == "fejer-demo") {
        emit(out, c, fejer_table(c));
        return kExitOk;
    }
    throw ValidationError("unknown command '" + c.command + "'");
}

int report_error(std::ostream& err, const std::string& kind, const std::string& message, int status) {
    json e;
    e["error"] = kind;
    e["message"] = message;
    e["exit_status"] = status;
    err << e.dump() << '\n';
    return status;
}

}  // namespace

std::pair<int, int> parse_n_range(const std::string& text) {
    auto to_int = [&](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            throw ParseError("invalid block length range '" + text + "'");
        }
        if (used != s.size()) throw ParseError("invalid block length range '" + text + "'");
        return v;
    };
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        int v = to_int(text);
        return {v, v};
    }
    return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
}

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::int64_t>)
                        os << v;
                    else if constexpr (std::is_same_v<T, double>)
                        os << format_number(v);
                    else if constexpr (std::is_same_v<T, std::string>)
                        os << v;
                },
                row[i]);
        }
        os << '\n';
    }
}

json to_json(const Table& table) {
    json rows = json::array();
    for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::visit(
                [&](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::monostate>)
                        obj[table.columns[i]] = nullptr;
                    else
                        obj[table.columns[i]] = v;
                },
                row[i]);
        }
        rows.push_back(std::move(obj));
    }
    return rows;
}

json to_json(const SpectralReport& report) {
    auto complex_json = [](Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; };
    auto vector_json = [&](const Eigen::VectorXcd& v) {
        json a = json::array();
        for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v(i)));
        return a;
    };
    json doc;
    doc["eigenvalues"] = json::array();
    doc["right_eigenvectors"] = json::array();
    doc["left_eigenvectors"] = json::array();
    for (std::size_t j = 0; j < report.eigenvalues.size(); ++j) {
        auto ev = complex_json(report.eigenvalues[j]);
        ev["modulus"] = std::abs(report.eigenvalues[j]);
        doc["eigenvalues"].push_back(ev);
        doc["right_eigenvectors"].push_back(vector_json(report.right[j]));
        doc["left_eigenvectors"].push_back(vector_json(report.left[j]));
    }
    return doc;
}

json to_json(const ChainStructure& s) {
    json doc;
    doc["irreducible"] = s.irreducible;
    doc["period"] = s.period ? json(*s.period) : json(nullptr);
    doc["positive"] = s.positive;
    doc["reducible_note"] = s.reducible_note ? json(*s.reducible_note) : json(nullptr);
    return doc;
}

json to_json(const ModeClassification& cls) {
    json doc;
    doc["mode"] = to_string(cls.mode);
    doc["M"] = cls.M ? json(*cls.M) : json(nullptr);
    doc["s"] = cls.s;
    doc["w"] = cls.w;
    doc["provenance"] = to_string(cls.provenance);
    doc["period"] = cls.period;
    doc["anchor"] = cls.anchor + 1;
    std::string flags;
    if (cls.degenerate) flags = "degenerate";
    if (cls.heuristic) flags += flags.empty() ? "heuristic" : ";heuristic";
    doc["flags"] = flags;
    doc["similarity_residual"] = cls.similarity_residual;
    if (!cls.note.empty()) doc["note"] = cls.note;
    return doc;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        return run_command(config, out);
    } catch (const ResourceLimit& e) {
        return report_error(err, e.kind(), e.what(), kExitResource);
    } catch (const ParseError& e) {
        return report_error(err, e.kind(), e.what(), kExitInvalid);
    } catch (const ValidationError& e) {
        return report_error(err, e.kind(), e.what(), kExitInvalid);
    } catch (const ReducibleChain& e) {
        return report_error(err, e.kind(), e.what(), kExitInvalid);
    } catch (const UndefinedAlpha& e) {
        return report_error(err, e.kind(), e.what(), kExitInvalid);
    } catch (const Error& e) {
        return report_error(err, e.kind(), e.what(), kExitFailure);
    } catch (const std::exception& e) {
        return report_error(err, "InternalError", e.what(), kExitFailure);
    }
}

int run(const RunConfig& config, std::ostream& err) {
    if (config.output_path.empty()) return run(config, std::cout, err);
    std::ofstream file(config.output_path, std::ios::binary);
    if (!file) return report_error(err, "IOError", "cannot write '" + config.output_path + "'", kExitFailure);
    return run(config, file, err);
}

int main_entry(int argc, char** argv) {
    CLI::App app{"Shannon code redundancy of Markov sources: exact values, asymptotic predictions and Fejer tools"};
    RunConfig config;
    std::string n_range = "1";
    int anchor = 1;
    app.add_option("--command", config.command, "classify | predict | exact | compare | sweep | fejer-demo")
        ->required()
        ->check(CLI::IsMember({"classify", "predict", "exact", "compare", "sweep", "fejer-demo"}));
    app.add_option("--source", config.source_path, "source description JSON");
    app.add_option("--n", n_range, "block length or inclusive range a..b");
    app.add_option("--xi", config.xi, "boundary margin in (0, 1/2)")->capture_default_str();
    app.add_option("--m-max", config.m_max, "largest m scanned for a unit spectral radius")->capture_default_str();
    app.add_option("--samples", config.samples, "Monte Carlo samples added to 'exact' (0 = none)");
    app.add_option("--seed", config.seed, "Monte Carlo seed")->capture_default_str();
    app.add_option("--out", config.output_path, "output file (default: standard output)");
    app.add_option("--format", config.format, "csv | json")->capture_default_str();
    app.add_option("--config", config.config_path, "JSON with resource limits and the sweep grid");
    app.add_option("--strategy", config.strategy, "auto | enumeration | count_dp")->capture_default_str();
    app.add_option("--anchor", anchor, "anchor state (1-based)")->capture_default_str();
    app.add_option("--theta", config.theta, "fejer-demo: sandwich width")->capture_default_str();
    app.add_option("--order", config.order, "fejer-demo: Fejer order N")->capture_default_str();
    app.add_option("--fn", config.fn, "fejer-demo: rho_minus | delta | rho_plus")->capture_default_str();
    app.add_option("--grid", config.grid, "fejer-demo: number of grid points on [0, 1]")->capture_default_str();
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }
    try {
        auto [lo, hi] = parse_n_range(n_range);
        config.n_first = lo;
        config.n_last = hi;
    } catch (const ParseError& e) {
        return report_error(std::cerr, e.kind(), e.what(), kExitInvalid);
    }
    config.anchor = anchor - 1;
    return run(config, std::cerr);
}

}  // namespace shannon_markov
