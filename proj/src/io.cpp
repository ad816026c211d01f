#include "qpoly/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qpoly {

namespace {

void append_escaped(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
}

nlohmann::json parse_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw InvalidInput("malformed JSON");
    return j;
}

Vector parse_amplitudes(const nlohmann::json& data, long dim) {
    if (!data.is_array() || static_cast<long>(data.size()) != dim)
        throw InvalidInput("state data length does not match dimensions");
    Vector v(dim);
    for (long i = 0; i < dim; ++i) {
        const auto& pair = data[static_cast<std::size_t>(i)];
        if (!pair.is_array() || pair.size() != 2)
            throw InvalidInput("complex entries must be [re, im] pairs");
        v[i] = Complex(pair[0].get<double>(), pair[1].get<double>());
    }
    return v;
}

}  // namespace

Json& Json::operator[](const std::string& key) {
    if (!is_object()) v_ = Object{};
    return std::get<Object>(v_)[key];
}

void Json::push_back(Json j) {
    if (!std::holds_alternative<Array>(v_)) v_ = Array{};
    std::get<Array>(v_).push_back(std::move(j));
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Json::dump_to(std::string& out, int indent, int depth) const {
    const std::string pad = indent < 0 ? "" : std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string pad_close = indent < 0 ? "" : std::string(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent < 0 ? "" : "\n";
    if (std::holds_alternative<std::nullptr_t>(v_)) {
        out += "null";
    } else if (const bool* b = std::get_if<bool>(&v_)) {
        out += *b ? "true" : "false";
    } else if (const std::int64_t* i = std::get_if<std::int64_t>(&v_)) {
        out += std::to_string(*i);
    } else if (const double* d = std::get_if<double>(&v_)) {
        out += format_double(*d);
    } else if (const std::string* s = std::get_if<std::string>(&v_)) {
        append_escaped(out, *s);
    } else if (const Array* a = std::get_if<Array>(&v_)) {
        if (a->empty()) { out += "[]"; return; }
        out += '[';
        out += nl;
        for (std::size_t i = 0; i < a->size(); ++i) {
            out += pad;
            (*a)[i].dump_to(out, indent, depth + 1);
            if (i + 1 < a->size()) out += ',';
            out += nl;
        }
        out += pad_close;
        out += ']';
    } else {
        const Object& o = std::get<Object>(v_);
        if (o.empty()) { out += "{}"; return; }
        out += '{';
        out += nl;
        std::size_t i = 0;
        for (const auto& [k, val] : o) {
            out += pad;
            append_escaped(out, k);
            out += indent < 0 ? ":" : ": ";
            val.dump_to(out, indent, depth + 1);
            if (++i < o.size()) out += ',';
            out += nl;
        }
        out += pad_close;
        out += '}';
    }
}

std::string Json::dump(int indent) const {
    std::string out;
    dump_to(out, indent, 0);
    return out;
}

namespace {

Json layout_json_fields(const SystemLayout& layout, const char* kind) {
    Json j = Json::object();
    Json dims = Json::array(), labels = Json::array();
    for (const Part& p : layout.parts()) {
        dims.push_back(p.dim);
        labels.push_back(p.label);
    }
    j["dims"] = std::move(dims);
    j["labels"] = std::move(labels);
    j["kind"] = kind;
    return j;
}

Json complex_pair(Complex c) {
    Json j = Json::array();
    j.push_back(c.real());
    j.push_back(c.imag());
    return j;
}

}  // namespace

Json state_to_json(const StateVector& psi) {
    Json j = layout_json_fields(psi.layout(), "pure");
    Json data = Json::array();
    for (long i = 0; i < psi.dim(); ++i) data.push_back(complex_pair(psi.amplitudes()[i]));
    j["data"] = std::move(data);
    return j;
}

Json state_to_json(const DensityOperator& rho) {
    Json j = layout_json_fields(rho.layout(), "mixed");
    Json data = Json::array();
    for (long r = 0; r < rho.dim(); ++r) {
        Json row = Json::array();
        for (long c = 0; c < rho.dim(); ++c) row.push_back(complex_pair(rho.matrix()(r, c)));
        data.push_back(std::move(row));
    }
    j["data"] = std::move(data);
    return j;
}

void save_state_file(const std::string& path, const LoadedState& state) {
    const Json j = std::holds_alternative<StateVector>(state)
                       ? state_to_json(std::get<StateVector>(state))
                       : state_to_json(std::get<DensityOperator>(state));
    write_text_file(path, j.dump() + "\n");
}

LoadedState state_from_json_text(const std::string& text) {
    const nlohmann::json j = parse_json(text);
    if (!j.contains("dims") || !j.contains("labels") || !j.contains("kind") || !j.contains("data"))
        throw InvalidInput("state file needs dims, labels, kind and data fields");
    if (!j["dims"].is_array() || !j["labels"].is_array() || j["dims"].size() != j["labels"].size())
        throw InvalidInput("dims and labels must be arrays of equal length");
    std::vector<Part> parts;
    for (std::size_t i = 0; i < j["dims"].size(); ++i)
        parts.push_back({j["labels"][i].get<std::string>(), j["dims"][i].get<long>()});
    SystemLayout layout(std::move(parts));
    const long dim = layout.total_dim();

    const std::string kind = j["kind"].get<std::string>();
    if (kind == "pure") {
        return StateVector(std::move(layout), parse_amplitudes(j["data"], dim));
    }
    if (kind == "mixed") {
        const auto& data = j["data"];
        if (!data.is_array() || static_cast<long>(data.size()) != dim)
            throw InvalidInput("matrix row count does not match dimensions");
        Matrix m(dim, dim);
        for (long r = 0; r < dim; ++r)
            m.row(r) = parse_amplitudes(data[static_cast<std::size_t>(r)], dim).transpose();
        return DensityOperator(std::move(layout), std::move(m));
    }
    throw InvalidInput("state kind must be 'pure' or 'mixed'");
}

LoadedState load_state_file(const std::string& path) {
    return state_from_json_text(read_text_file(path));
}

namespace {

Json optional_number(const std::optional<double>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json report_to_json(const ReportRecord& record) {
    Json j = Json::object();
    j["command"] = record.command;
    j["state"] = record.state_desc;
    j["focus"] = record.focus;
    j["seed"] = static_cast<long long>(record.seed);
    j["config"] = record.config;
    Json checks = Json::array();
    for (const CheckRecord& c : record.checks) {
        Json cj = Json::object();
        cj["name"] = c.name;
        cj["lhs"] = optional_number(c.lhs);
        cj["middle"] = optional_number(c.middle);
        cj["rhs"] = optional_number(c.rhs);
        cj["slack1"] = optional_number(c.slack1);
        cj["slack2"] = optional_number(c.slack2);
        cj["tolerance"] = optional_number(c.tolerance);
        cj["verdict"] = c.verdict;
        cj["details"] = c.details;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["summary"] = record.summary;
    Json timing = Json::object();
    timing["wall_ms"] = record.wall_ms;
    j["timing"] = std::move(timing);
    return j;
}

std::string report_to_csv(const ReportRecord& record) {
    std::string out = "check,lhs,middle,rhs,slack1,slack2,tolerance,verdict\n";
    auto cell = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    for (const CheckRecord& c : record.checks) {
        out += c.name + ',' + cell(c.lhs) + ',' + cell(c.middle) + ',' + cell(c.rhs) + ',' +
               cell(c.slack1) + ',' + cell(c.slack2) + ',' + cell(c.tolerance) + ',' + c.verdict +
               '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f << text;
    if (!f) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    if (f.bad()) throw IoError("read failed: " + path);
    return ss.str();
}

}  // namespace qpoly
