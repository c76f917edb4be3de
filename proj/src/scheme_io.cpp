#include "mfpotts/scheme_io.hpp"

#include <sstream>

#include <json.hpp>

#include "mfpotts/errors.hpp"

namespace mfpotts {

namespace {

SchemeDocument from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) throw DomainError("scheme document must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "q" && key != "z" && key != "partitions") {
            throw DomainError("unknown key in scheme document: " + key);
        }
    }
    if (!doc.contains("q") || !doc["q"].is_number_integer()) throw DomainError("scheme needs integer \"q\"");
    if (!doc.contains("partitions") || !doc["partitions"].is_array()) {
        throw DomainError("scheme needs a \"partitions\" array");
    }

    SchemeDocument out;
    out.scheme.q = doc["q"].get<int>();
    if (doc.contains("z")) {
        if (!doc["z"].is_number()) throw DomainError("\"z\" must be a number");
        out.z = doc["z"].get<double>();
    }
    int t = 0;
    for (const auto& part : doc["partitions"]) {
        if (!part.is_array()) {
            throw SchemeError(SchemeError::Kind::InvalidPartition, t, "partition must be an array of blocks");
        }
        std::vector<std::vector<int>> blocks;
        for (const auto& block : part) {
            if (!block.is_array()) {
                throw SchemeError(SchemeError::Kind::InvalidPartition, t, "block must be an array of colors");
            }
            std::vector<int> colors;
            for (const auto& c : block) {
                if (!c.is_number_integer()) {
                    throw SchemeError(SchemeError::Kind::InvalidPartition, t, "colors must be integers");
                }
                colors.push_back(c.get<int>());
            }
            blocks.push_back(std::move(colors));
        }
        out.scheme.partitions.emplace_back(std::move(blocks));
        ++t;
    }
    validate(out.scheme);
    return out;
}

}  // namespace

SchemeDocument parse_scheme(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError(std::string("malformed scheme JSON: ") + e.what());
    }
    return from_json(doc);
}

SchemeDocument parse_scheme(const std::string& text) {
    std::istringstream in(text);
    return parse_scheme(in);
}

std::string to_json(const CollapsingScheme& scheme, std::optional<double> z) {
    nlohmann::json doc;
    doc["q"] = scheme.q;
    if (z) doc["z"] = *z;
    doc["partitions"] = nlohmann::json::array();
    for (const auto& part : scheme.partitions) doc["partitions"].push_back(part.blocks());
    return doc.dump();
}

}  // namespace mfpotts
