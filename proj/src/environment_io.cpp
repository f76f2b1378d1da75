#include "rwre/environment_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace rwre {

using nlohmann::json;

namespace {

json parse_document(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw InvalidArgument(std::string("malformed JSON: ") + e.what());
    }
}

template <typename T> T field(const json &doc, const char *name) {
    if (!doc.contains(name)) {
        throw InvalidArgument(std::string("missing field '") + name + "'");
    }
    try {
        return doc.at(name).get<T>();
    } catch (const json::exception &e) {
        throw InvalidArgument(std::string("field '") + name + "' has the wrong type: " + e.what());
    }
}

} // namespace

EnvironmentSpec environment_from_json(const std::string &text) {
    const json doc = parse_document(text);
    if (!doc.is_object()) {
        throw InvalidArgument("environment document must be a JSON object");
    }
    const auto m = field<long long>(doc, "m");
    const auto rows = field<std::vector<std::vector<double>>>(doc, "P");
    const auto signs = field<std::vector<int>>(doc, "g");
    const std::string label = doc.contains("label") ? field<std::string>(doc, "label") : "custom";

    if (m < 1) {
        throw InvalidArgument("'m' must be positive");
    }
    if (rows.size() != static_cast<std::size_t>(m) || signs.size() != static_cast<std::size_t>(m)) {
        throw InvalidArgument("'P' and 'g' must have m = " + std::to_string(m) + " entries");
    }
    Eigen::MatrixXd P(m, m);
    for (Eigen::Index y = 0; y < m; ++y) {
        const auto &row = rows[static_cast<std::size_t>(y)];
        if (row.size() != static_cast<std::size_t>(m)) {
            throw InvalidArgument("row " + std::to_string(y) + " of 'P' has " +
                                  std::to_string(row.size()) + " entries");
        }
        for (Eigen::Index z = 0; z < m; ++z) {
            P(y, z) = row[static_cast<std::size_t>(z)];
        }
    }
    Eigen::VectorXi g(m);
    for (Eigen::Index y = 0; y < m; ++y) {
        g(y) = signs[static_cast<std::size_t>(y)];
    }
    return EnvironmentSpec::create(std::move(P), std::move(g), label);
}

std::string environment_to_json(const EnvironmentSpec &spec) {
    json doc;
    doc["m"] = spec.states();
    json rows = json::array();
    for (Eigen::Index y = 0; y < spec.states(); ++y) {
        json row = json::array();
        for (Eigen::Index z = 0; z < spec.states(); ++z) {
            row.push_back(spec.transition()(y, z));
        }
        rows.push_back(std::move(row));
    }
    doc["P"] = std::move(rows);
    doc["g"] = std::vector<int>(spec.signs().data(), spec.signs().data() + spec.signs().size());
    doc["label"] = spec.label();
    return doc.dump(2);
}

EnvironmentSpec k_dep_from_json(const std::string &text) {
    const json doc = parse_document(text);
    if (!doc.is_object()) {
        throw InvalidArgument("k-dependent document must be a JSON object");
    }
    const int k = field<int>(doc, "k");
    const json table_doc = field<json>(doc, "table");
    if (!table_doc.is_object()) {
        throw InvalidArgument("'table' must be an object keyed by history");
    }
    KDepTable table;
    for (const auto &[key, entry] : table_doc.items()) {
        table[key] = MarkovParams{field<double>(entry, "a"), field<double>(entry, "b")};
    }
    return build_k_dep(k, table);
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

} // namespace rwre
