#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "shannon_markov/asymptotics.hpp"
#include "shannon_markov/markov_model.hpp"
#include "shannon_markov/spectral.hpp"

namespace shannon_markov {

struct RunConfig {
    std::string command;  ///< classify | predict | exact | compare | sweep | fejer-demo
    std::string source_path;
    int n_first = 1;
    int n_last = 1;
    double xi = kDefaultXi;
    std::int64_t m_max = kDefaultMMax;
    std::uint64_t samples = 0;  ///< Monte Carlo rows are added to `exact` when positive
    std::uint64_t seed = 1;
    std::string output_path;  ///< empty: standard output
    std::string format = "csv";
    std::string config_path;  ///< JSON with "limits" and "sweep" sections
    std::string strategy = "auto";
    State anchor = 0;
    // fejer-demo
    double theta = 0.1;
    int order = 16;
    std::string fn = "rho_minus";
    int grid = 201;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitResource = 3;

/// Parses "7" or "4..14" into an inclusive range.
std::pair<int, int> parse_n_range(const std::string& text);

/// A report table; CSV and JSON renderings carry the same cells.
struct Table {
    using Cell = std::variant<std::monostate, std::int64_t, double, std::string>;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& os, const Table& table);
nlohmann::json to_json(const Table& table);

nlohmann::json to_json(const SpectralReport& report);
nlohmann::json to_json(const ChainStructure& structure);
nlohmann::json to_json(const ModeClassification& cls);

/// Runs one command, writing the report to `out` and error JSON to `err`. Returns the exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);
/// As above, but honours config.output_path.
int run(const RunConfig& config, std::ostream& err);

/// Command-line entry point.
int main_entry(int argc, char** argv);

}  // namespace shannon_markov
