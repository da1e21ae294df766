#include "linforms/serialize.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

namespace linforms {

namespace {

using nlohmann::json;

json pe_encode(const PowerExpr& e) {
    switch (e.kind()) {
        case PowerExpr::Kind::Int:
            return e.int_value().get_str();
        case PowerExpr::Kind::Mul:
        case PowerExpr::Kind::Add: {
            json arr = json::array();
            for (const PowerExpr& c : e.children()) arr.push_back(pe_encode(c));
            return json{{e.kind() == PowerExpr::Kind::Mul ? "mul" : "add", std::move(arr)}};
        }
        case PowerExpr::Kind::Pow:
            return json{{"pow", json::array({pe_encode(e.base()), pe_encode(e.exponent())})}};
    }
    throw std::logic_error("pe_encode: bad node kind");
}

PowerExpr pe_decode(const json& j) {
    if (j.is_string()) return PowerExpr::integer(parse_bigint(j.get<std::string>()));
    if (!j.is_object() || j.size() != 1)
        throw std::invalid_argument(
            "powerexpr json: expected a decimal string or a one-key object");
    const auto it = j.begin();
    const std::string& key = it.key();
    const json& val = it.value();
    if (!val.is_array()) throw std::invalid_argument("powerexpr json: '" + key + "' needs an array");
    if (key == "pow") {
        if (val.size() != 2)
            throw std::invalid_argument("powerexpr json: 'pow' needs [base, exponent]");
        return PowerExpr::pow(pe_decode(val[0]), pe_decode(val[1]));
    }
    if (key == "mul" || key == "add") {
        std::vector<PowerExpr> children;
        children.reserve(val.size());
        for (const json& c : val) children.push_back(pe_decode(c));
        return key == "mul" ? PowerExpr::mul(std::move(children))
                            : PowerExpr::add(std::move(children));
    }
    throw std::invalid_argument("powerexpr json: unknown node kind '" + key + "'");
}

json mat_encode(const MatrixSpec& mat) {
    json rows = json::array();
    for (const auto& row : mat.entries) {
        json r = json::array();
        for (const auto& cell : row) {
            if (const BigInt* v = std::get_if<BigInt>(&cell))
                r.push_back(v->get_str());
            else
                r.push_back(pe_encode(std::get<PowerExpr>(cell)));
        }
        rows.push_back(std::move(r));
    }
    return json{{"entries", std::move(rows)}, {"m", mat.m}, {"n", mat.n}};
}

MatrixSpec mat_decode(const json& j) {
    MatrixSpec mat;
    mat.m = j.at("m").get<unsigned>();
    mat.n = j.at("n").get<unsigned>();
    if (mat.m == 0 || mat.n == 0)
        throw std::invalid_argument("matrix json: dimensions must be positive");
    const json& rows = j.at("entries");
    if (!rows.is_array() || rows.size() != mat.m)
        throw std::invalid_argument("matrix json: need m entry rows");
    for (const json& row : rows) {
        if (!row.is_array() || row.size() != mat.n)
            throw std::invalid_argument("matrix json: need n entries per row");
        std::vector<MatrixSpec::Entry> cells;
        cells.reserve(mat.n);
        for (const json& cell : row) {
            if (cell.is_string())
                cells.emplace_back(parse_bigint(cell.get<std::string>()));
            else
                cells.emplace_back(pe_decode(cell));
        }
        mat.entries.push_back(std::move(cells));
    }
    return mat;
}

CertificateKind kind_from_name(const std::string& name) {
    if (name == "exhaustive") return CertificateKind::Exhaustive;
    if (name == "structural") return CertificateKind::Structural;
    if (name == "inconclusive") return CertificateKind::Inconclusive;
    throw std::invalid_argument("certificate json: unknown kind '" + name + "'");
}

json cert_encode(const Certificate& cert) {
    json j;
    j["kind"] = certificate_kind_name(cert.kind);
    j["matrix"] = mat_encode(cert.matrix);
    j["budget"] = cert.budget;
    j["caps"] = json{{"degree_cap", cert.degree_cap}, {"target", cert.target}};
    json records = json::array();
    for (const TopologyRecord& r : cert.records) {
        json o;
        o["topology"] = r.topology;
        if (r.excluded()) {
            o["annihilator"] = r.annihilator;
            o["value"] = r.value.get_str();
        } else {
            o["reason"] = r.reason;
        }
        records.push_back(std::move(o));
    }
    j["records"] = std::move(records);
    j["toolversion"] = kToolVersion;

    const bool structural_payload = cert.sym_d || cert.sym_H || !cert.window_checks.empty() ||
                                    !cert.chain_checks.empty() || !cert.note.empty() ||
                                    !cert.refusal.empty();
    if (structural_payload) {
        json t;
        if (cert.sym_d) t["d"] = pe_encode(*cert.sym_d);
        if (cert.sym_H) t["H"] = pe_encode(*cert.sym_H);
        json windows = json::array();
        for (const WindowCheck& w : cert.window_checks)
            windows.push_back(json{{"bound", w.bound},
                                   {"comparison", w.comparison},
                                   {"entry", w.entry},
                                   {"holds", w.holds}});
        t["windows"] = std::move(windows);
        json chain = json::array();
        for (const ChainCheck& c : cert.chain_checks)
            chain.push_back(json{{"holds", c.holds}, {"name", c.name}});
        t["chain"] = std::move(chain);
        t["note"] = cert.note;
        t["refusal"] = cert.refusal;
        j["transcript"] = std::move(t);
    }
    return j;
}

Certificate cert_decode(const json& j) {
    Certificate cert;
    cert.kind = kind_from_name(j.at("kind").get<std::string>());
    cert.matrix = mat_decode(j.at("matrix"));
    cert.budget = j.at("budget").get<unsigned>();
    const json& caps = j.at("caps");
    cert.degree_cap = caps.at("degree_cap").get<unsigned>();
    cert.target = caps.at("target").get<unsigned>();
    for (const json& o : j.at("records")) {
        TopologyRecord r;
        r.topology = o.at("topology").get<std::string>();
        if (o.contains("reason")) {
            r.reason = o.at("reason").get<std::string>();
        } else {
            r.annihilator = o.at("annihilator").get<std::string>();
            r.value = parse_bigint(o.at("value").get<std::string>());
        }
        cert.records.push_back(std::move(r));
    }
    if (j.contains("transcript")) {
        const json& t = j.at("transcript");
        if (t.contains("d")) cert.sym_d = pe_decode(t.at("d"));
        if (t.contains("H")) cert.sym_H = pe_decode(t.at("H"));
        for (const json& w : t.at("windows"))
            cert.window_checks.push_back(WindowCheck{w.at("entry").get<unsigned>(),
                                                     w.at("bound").get<std::string>(),
                                                     w.at("comparison").get<std::string>(),
                                                     w.at("holds").get<bool>()});
        for (const json& c : t.at("chain"))
            cert.chain_checks.push_back(
                ChainCheck{c.at("name").get<std::string>(), c.at("holds").get<bool>()});
        cert.note = t.at("note").get<std::string>();
        cert.refusal = t.at("refusal").get<std::string>();
    }
    return cert;
}

template <typename F>
auto decode_guarded(const std::string& text, const char* what, F&& f) {
    json j = json::parse(text);
    try {
        return f(j);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string(what) + ": " + e.what());
    }
}

}  // namespace

std::string powerexpr_to_json(const PowerExpr& e) { return pe_encode(e).dump(2) + "\n"; }

PowerExpr powerexpr_from_json(const std::string& text) {
    return decode_guarded(text, "powerexpr_from_json", [](const json& j) { return pe_decode(j); });
}

std::string matrix_to_json(const MatrixSpec& mat) { return mat_encode(mat).dump(2) + "\n"; }

MatrixSpec matrix_from_json(const std::string& text) {
    return decode_guarded(text, "matrix_from_json", [](const json& j) { return mat_decode(j); });
}

std::string certificate_to_json(const Certificate& cert) { return cert_encode(cert).dump(2) + "\n"; }

Certificate certificate_from_json(const std::string& text) {
    return decode_guarded(text, "certificate_from_json",
                          [](const json& j) { return cert_decode(j); });
}

}  // namespace linforms
