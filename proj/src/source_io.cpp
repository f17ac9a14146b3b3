#include "shannon_markov/source_io.hpp"

#include <fstream>
#include <sstream>

#include "shannon_markov/errors.hpp"

namespace shannon_markov {

namespace {

using nlohmann::json;

bool any_string(const json& doc) {
    for (const auto& v : doc["initial"])
        if (v.is_string()) return true;
    for (const auto& row : doc["transitions"])
        for (const auto& v : row)
            if (v.is_string()) return true;
    return false;
}

ProbValue parse_entry(const json& v, bool exact, const std::string& where) {
    if (v.is_string()) return parse_probspec(v.get<std::string>());
    if (!v.is_number()) throw ParseError(where + ": expected a number or a probability string");
    const double x = v.get<double>();
    if (exact) {
        if (x == 0.0) return ProbValue::zero();
        if (x == 1.0) return ExactProb(Rational(1));
        throw ParseError(where + ": exact sources accept only 0 and 1 as plain numbers; write other values as strings");
    }
    try {
        return ProbValue::real(x);
    } catch (const std::domain_error& e) {
        throw ParseError(where + ": " + e.what());
    }
}

}  // namespace

MarkovSource parse_source(const json& doc) {
    if (!doc.is_object()) throw ParseError("source document must be a JSON object");
    for (const char* key : {"r", "initial", "transitions"})
        if (!doc.contains(key)) throw ParseError(std::string("source document lacks \"") + key + "\"");
    if (!doc["r"].is_number_integer()) throw ParseError("\"r\" must be an integer");
    const auto r = doc["r"].get<long long>();
    if (r < 2) throw ValidationError("alphabet size r must be at least 2");
    const auto& initial = doc["initial"];
    const auto& transitions = doc["transitions"];
    if (!initial.is_array() || static_cast<long long>(initial.size()) != r)
        throw ParseError("\"initial\" must be an array of r entries");
    if (!transitions.is_array() || static_cast<long long>(transitions.size()) != r)
        throw ParseError("\"transitions\" must be an array of r rows");
    for (const auto& row : transitions)
        if (!row.is_array() || static_cast<long long>(row.size()) != r)
            throw ParseError("every transition row must have r entries");

    const bool exact = any_string(doc);
    std::vector<ProbValue> init;
    for (std::size_t k = 0; k < initial.size(); ++k)
        init.push_back(parse_entry(initial[k], exact, "initial[" + std::to_string(k + 1) + "]"));
    std::vector<std::vector<ProbValue>> rows;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        auto& out = rows.emplace_back();
        for (std::size_t j = 0; j < transitions[i].size(); ++j)
            out.push_back(parse_entry(transitions[i][j], exact,
                                      "transitions[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]"));
    }
    return MarkovSource(std::move(init), std::move(rows));
}

MarkovSource parse_source_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    return parse_source(doc);
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError("invalid JSON in '" + path + "': " + e.what());
    }
}

MarkovSource load_source(const std::string& path) {
    return parse_source(load_json_file(path));
}

json source_to_json(const MarkovSource& source) {
    auto entry = [&](const ProbValue& p) -> json {
        if (source.exact()) return p.is_zero() ? json("0") : json(p.str());
        return p.is_zero() ? 0.0 : p.real_value();
    };
    json doc;
    doc["r"] = source.size();
    doc["initial"] = json::array();
    for (const auto& p : source.initial_vector()) doc["initial"].push_back(entry(p));
    doc["transitions"] = json::array();
    for (const auto& row : source.transition_rows()) {
        json out = json::array();
        for (const auto& p : row) out.push_back(entry(p));
        doc["transitions"].push_back(out);
    }
    return doc;
}

ResourceLimits parse_limits(const json& doc) {
    ResourceLimits limits;
    if (doc.is_null()) return limits;
    if (!doc.is_object()) throw ParseError("\"limits\" must be an object");
    try {
        if (doc.contains("max_enumeration")) limits.max_enumeration = doc["max_enumeration"].get<std::uint64_t>();
        if (doc.contains("count_dp_max_states"))
            limits.count_dp_max_states = doc["count_dp_max_states"].get<std::size_t>();
        if (doc.contains("count_dp_max_n")) {
            const auto& m = doc["count_dp_max_n"];
            if (m.contains("2")) limits.count_dp_max_n_r2 = m["2"].get<int>();
            if (m.contains("3")) limits.count_dp_max_n_r3 = m["3"].get<int>();
            if (m.contains("other")) limits.count_dp_max_n_larger = m["other"].get<int>();
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid limits: ") + e.what());
    }
    return limits;
}

}  // namespace shannon_markov
