#pragma once

#include "dgbv/rational.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dgbv {

/// Ordered result tree; identical inputs produce byte-identical output.
struct ReportNode {
    std::string name;
    std::optional<bool> pass;
    std::vector<std::pair<std::string, std::string>> fields;
    std::vector<ReportNode> children;

    ReportNode() = default;
    explicit ReportNode(std::string n) : name(std::move(n)) {}

    ReportNode& field(const std::string& k, const std::string& v)
    {
        fields.emplace_back(k, v);
        return *this;
    }

    ReportNode& child(ReportNode n)
    {
        children.push_back(std::move(n));
        return *this;
    }

    bool all_pass() const
    {
        if (pass.has_value() && !*pass)
            return false;
        for (const auto& c : children)
            if (!c.all_pass())
                return false;
        return true;
    }
};

inline void emit_text(const ReportNode& node, std::ostream& os, int indent = 0)
{
    os << std::string(indent * 2, ' ') << node.name;
    if (node.pass.has_value())
        os << (": " + std::string(*node.pass ? "pass" : "FAIL"));
    os << "\n";
    for (const auto& [k, v] : node.fields)
        os << std::string(indent * 2 + 2, ' ') << k << " = " << v << "\n";
    for (const auto& c : node.children)
        emit_text(c, os, indent + 1);
}

inline nlohmann::ordered_json to_json(const ReportNode& node)
{
    nlohmann::ordered_json j;
    j["name"] = node.name;
    if (node.pass.has_value())
        j["pass"] = *node.pass;
    if (!node.fields.empty()) {
        nlohmann::ordered_json f;
        for (const auto& [k, v] : node.fields)
            f[k] = v;
        j["fields"] = f;
    }
    if (!node.children.empty()) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& c : node.children)
            arr.push_back(to_json(c));
        j["children"] = arr;
    }
    return j;
}

inline void emit_report(const ReportNode& node, std::ostream& os, const std::string& format)
{
    if (format == "json") {
        os << to_json(node).dump(2) << "\n";
    } else {
        emit_text(node, os);
    }
}

} // namespace dgbv
