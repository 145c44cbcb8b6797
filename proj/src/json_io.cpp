#include "latdp/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace latdp {

json space_to_json(const LatticeSpace& s) {
    json norm;
    switch (s.norm.kind) {
        case NormKind::Lp:
            norm["kind"] = "lp";
            if (std::isinf(s.norm.p)) norm["p"] = "inf";
            else norm["p"] = s.norm.p;
            break;
        case NormKind::WeightedLp:
            norm["kind"] = "weighted_lp";
            norm["p"] = s.norm.p;
            norm["weights"] = s.norm.weights;
            break;
        case NormKind::Sup:
            norm["kind"] = "sup";
            break;
    }
    return json{{"dim", s.dim}, {"norm", norm}};
}

LatticeSpace space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("norm"))
        throw ParseError("space: expected object with dim and norm");
    LatticeSpace s;
    if (!j["dim"].is_number_unsigned() && !j["dim"].is_number_integer())
        throw ParseError("space: dim must be an integer");
    const long long dim = j["dim"].get<long long>();
    if (dim < 1) throw ParseError("space: dim must be >= 1");
    s.dim = static_cast<std::size_t>(dim);

    const json& n = j["norm"];
    if (!n.is_object() || !n.contains("kind")) throw ParseError("space: norm.kind missing");
    const std::string kind = n["kind"].get<std::string>();
    auto read_p = [&]() -> double {
        if (!n.contains("p")) throw ParseError("space: norm.p missing");
        if (n["p"].is_string()) {
            if (n["p"].get<std::string>() == "inf")
                return std::numeric_limits<double>::infinity();
            throw ParseError("space: norm.p string must be \"inf\"");
        }
        if (!n["p"].is_number()) throw ParseError("space: norm.p must be a number or \"inf\"");
        return n["p"].get<double>();
    };
    if (kind == "lp") {
        s.norm = NormSpec::lp(read_p());
    } else if (kind == "weighted_lp") {
        if (!n.contains("weights") || !n["weights"].is_array())
            throw ParseError("space: weighted_lp requires weights array");
        s.norm = NormSpec::weighted_lp(read_p(), n["weights"].get<std::vector<double>>());
    } else if (kind == "sup") {
        s.norm = NormSpec::sup();
    } else {
        throw ParseError("space: unknown norm kind '" + kind + "'");
    }
    try {
        validate_space(s);
    } catch (const DimensionError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(std::string("space: ") + e.what());
    }
    return s;
}

json operator_to_json(const LatticeOperator& t) {
    json rows = json::array();
    for (std::size_t r = 0; r < t.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < t.cols(); ++c) row.push_back(t.at(r, c));
        rows.push_back(std::move(row));
    }
    return json{{"domain", space_to_json(t.domain)},
                {"codomain", space_to_json(t.codomain)},
                {"matrix", rows}};
}

LatticeOperator operator_from_json(const json& j) {
    if (!j.is_object() || !j.contains("domain") || !j.contains("codomain") ||
        !j.contains("matrix"))
        throw ParseError("operator: expected object with domain, codomain, matrix");
    LatticeSpace dom = space_from_json(j["domain"]);
    LatticeSpace cod = space_from_json(j["codomain"]);
    const json& m = j["matrix"];
    if (!m.is_array()) throw ParseError("operator: matrix must be an array of rows");
    if (m.size() != cod.dim)
        throw DimensionError("operator: matrix row count != codomain dim");
    std::vector<double> data;
    data.reserve(dom.dim * cod.dim);
    for (const auto& row : m) {
        if (!row.is_array()) throw ParseError("operator: matrix rows must be arrays");
        if (row.size() != dom.dim)
            throw DimensionError("operator: matrix row length != domain dim");
        for (const auto& e : row) {
            if (!e.is_number()) throw ParseError("operator: matrix entries must be numbers");
            const double v = e.get<double>();
            if (!std::isfinite(v)) throw ParseError("operator: matrix entry not finite");
            data.push_back(v);
        }
    }
    return make_operator(std::move(dom), std::move(cod), std::move(data));
}

LatticeOperator load_operator_file(const std::string& path) {
    return operator_from_json(load_json_file(path));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ParseError(std::string("malformed JSON in ") + path + ": " + e.what());
    }
    return j;
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw InvalidInput("cannot write file: " + path);
    out << j.dump(2) << "\n";
}

std::string digest_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace latdp
