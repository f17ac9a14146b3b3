#pragma once

#include <string>

#include "json.hpp"
#include "shannon_markov/markov_model.hpp"
#include "shannon_markov/redundancy.hpp"

namespace shannon_markov {

/**
 * Source description: {"r": int, "initial": [probspec], "transitions": [[probspec]]}.
 * A probspec is a JSON number (floating source) or a string such as "1/3",
 * "2^(-1/2)" or "3 * 2^(-2)" (exact source). In an exact source the numbers
 * 0 and 1 may also be written as plain JSON numbers.
 * Throws ParseError for malformed documents; row sums are not checked here.
 */
MarkovSource parse_source(const nlohmann::json& doc);
MarkovSource parse_source_text(const std::string& text);
MarkovSource load_source(const std::string& path);

nlohmann::json source_to_json(const MarkovSource& source);

/// Reads {"max_enumeration", "count_dp_max_n": {"2", "3", "other"}, "count_dp_max_states"}; missing keys keep defaults.
ResourceLimits parse_limits(const nlohmann::json& doc);

nlohmann::json load_json_file(const std::string& path);

}  // namespace shannon_markov
