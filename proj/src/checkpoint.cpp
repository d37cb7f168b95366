#include "varnet/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace varnet {

std::string network_to_json(const Network& net) {
    net.validate();
    nlohmann::json doc;
    doc["format_version"] = kCheckpointFormatVersion;
    doc["layer_widths"] = net.spec.layer_widths;
    doc["activation"] = to_string(net.spec.activation);

    auto& layers = doc["weights"] = nlohmann::json::array();
    for (const auto& m : net.weights) {
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < m.rows(); ++i) {
            const auto r = m.row(i);
            rows.push_back(std::vector<double>(r.begin(), r.end()));
        }
        layers.push_back(std::move(rows));
    }
    return doc.dump();
}

Network network_from_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw MalformedDocumentError(std::string("checkpoint: unparseable document: ") + e.what());
    }

    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer()) {
        throw MalformedDocumentError("checkpoint: missing field 'format_version'");
    }
    const int version = doc["format_version"].get<int>();
    if (version != kCheckpointFormatVersion) {
        throw VersionMismatchError("checkpoint: field 'format_version' is " + std::to_string(version) +
                                   ", expected " + std::to_string(kCheckpointFormatVersion));
    }
    for (const char* field : {"layer_widths", "activation", "weights"}) {
        if (!doc.contains(field)) {
            throw MalformedDocumentError(std::string("checkpoint: missing field '") + field + "'");
        }
    }

    Network net;
    try {
        net.spec.layer_widths = doc["layer_widths"].get<std::vector<int>>();
        net.spec.activation = activation_from_string(doc["activation"].get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw MalformedDocumentError(std::string("checkpoint: bad header field: ") + e.what());
    }
    try {
        net.spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ShapeError(std::string("checkpoint: field 'layer_widths': ") + e.what());
    }

    const auto& layers = doc["weights"];
    if (!layers.is_array() || static_cast<int>(layers.size()) != net.spec.depth()) {
        throw ShapeError("checkpoint: field 'weights' must hold " + std::to_string(net.spec.depth()) +
                         " layer matrices");
    }
    for (int l = 0; l < net.spec.depth(); ++l) {
        const int rows = net.spec.layer_widths[l + 1];
        const int cols = net.spec.layer_widths[l] + 1;
        const auto& jm = layers[l];
        if (!jm.is_array() || static_cast<int>(jm.size()) != rows) {
            throw ShapeError("checkpoint: field 'weights[" + std::to_string(l) + "]' must hold " +
                             std::to_string(rows) + " rows");
        }
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i) {
            const auto& jr = jm[i];
            if (!jr.is_array() || static_cast<int>(jr.size()) != cols) {
                throw ShapeError("checkpoint: field 'weights[" + std::to_string(l) + "][" +
                                 std::to_string(i) + "]' must hold " + std::to_string(cols) + " entries");
            }
            for (int j = 0; j < cols; ++j) {
                if (!jr[j].is_number()) {
                    throw MalformedDocumentError("checkpoint: field 'weights[" + std::to_string(l) + "][" +
                                                 std::to_string(i) + "][" + std::to_string(j) +
                                                 "]' is not a number");
                }
                m(i, j) = jr[j].get<double>();
            }
        }
        net.weights.push_back(std::move(m));
    }

    try {
        net.validate();
    } catch (const std::invalid_argument& e) {
        throw ShapeError(std::string("checkpoint: ") + e.what());
    }
    return net;
}

void save_network(const Network& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw CheckpointError("checkpoint: cannot open " + path.string() + " for writing");
    out << network_to_json(net) << "\n";
    if (!out) throw CheckpointError("checkpoint: short write to " + path.string());
}

Network load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("checkpoint: cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return network_from_json(buf.str());
}

}  // namespace varnet
