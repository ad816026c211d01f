#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qpoly/states.hpp"

namespace qpoly {

/// Minimal JSON tree with a canonical dump: object keys sorted, floats
/// written with 17 significant digits, so identical records serialize to
/// identical bytes. Parsing elsewhere uses nlohmann/json.
class Json {
  public:
    using Array = std::vector<Json>;
    using Object = std::map<std::string, Json>;

    Json() : v_(nullptr) {}
    Json(std::nullptr_t) : v_(nullptr) {}
    Json(bool b) : v_(b) {}
    Json(int i) : v_(static_cast<std::int64_t>(i)) {}
    Json(long i) : v_(static_cast<std::int64_t>(i)) {}
    Json(long long i) : v_(static_cast<std::int64_t>(i)) {}
    Json(unsigned long long u) : v_(static_cast<std::int64_t>(u)) {}
    Json(double d) : v_(d) {}
    Json(const char* s) : v_(std::string(s)) {}
    Json(std::string s) : v_(std::move(s)) {}
    Json(Array a) : v_(std::move(a)) {}
    Json(Object o) : v_(std::move(o)) {}

    static Json array() { return Json(Array{}); }
    static Json object() { return Json(Object{}); }

    Json& operator[](const std::string& key);
    void push_back(Json j);

    bool is_object() const { return std::holds_alternative<Object>(v_); }

    /// Canonical serialization; `indent` < 0 gives a single line.
    std::string dump(int indent = 2) const;

  private:
    std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> v_;
    void dump_to(std::string& out, int indent, int depth) const;
};

/// Formats a double with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Either kind of state loaded from disk.
using LoadedState = std::variant<StateVector, DensityOperator>;

/// State-file schema: {"data": ..., "dims": [...], "kind": "pure"|"mixed",
/// "labels": [...]} with complex entries as [re, im] pairs, matrices
/// row-major. Load/save round-trips are byte-identical.
Json state_to_json(const StateVector& psi);
Json state_to_json(const DensityOperator& rho);
void save_state_file(const std::string& path, const LoadedState& state);
LoadedState load_state_file(const std::string& path);
LoadedState state_from_json_text(const std::string& text);

/// One verification or computation check inside a report.
struct CheckRecord {
    std::string name;
    std::optional<double> lhs, middle, rhs, slack1, slack2, tolerance;
    std::string verdict;  // PASS | FAIL | INCONCLUSIVE | NA
    Json details = Json::object();
};

/// A full report: echoed inputs, per-check rows, summary, timing.
struct ReportRecord {
    std::string command;
    std::string state_desc;
    std::string focus;
    std::uint64_t seed = 0;
    Json config = Json::object();
    std::vector<CheckRecord> checks;
    Json summary = Json::object();
    double wall_ms = 0.0;
};

Json report_to_json(const ReportRecord& record);

/// CSV with the fixed column set
/// check,lhs,middle,rhs,slack1,slack2,tolerance,verdict (one row per check).
std::string report_to_csv(const ReportRecord& record);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace qpoly
