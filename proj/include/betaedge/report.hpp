#pragma once

#include "betaedge/config.hpp"
#include "betaedge/pointproc.hpp"

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace betaedge {

using json = nlohmann::ordered_json;

inline constexpr const char* report_schema = "betaedge.report";
inline constexpr int report_schema_version = 1;

// SHA-1 of "blob <size>\0<content>", as git hashes file contents.
inline std::string git_blob_hash(const std::string& content) {
    std::string data = "blob " + std::to_string(content.size());
    data.push_back('\0');
    data += content;
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha1(), nullptr))
        throw std::runtime_error("git_blob_hash: digest failed");
    std::string hex;
    char buf[3];
    for (unsigned i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

namespace detail {

inline void write_json(std::ostream& o, const json& j, int depth) {
    const std::string pad(2 * (depth + 1), ' '), close(2 * depth, ' ');
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            o << "{}";
            return;
        }
        o << "{\n";
        std::size_t i = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++i) {
            o << pad << json(it.key()).dump() << ": ";
            write_json(o, it.value(), depth + 1);
            o << (i + 1 < j.size() ? ",\n" : "\n");
        }
        o << close << "}";
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            o << "[]";
            return;
        }
        o << "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            o << pad;
            write_json(o, j[i], depth + 1);
            o << (i + 1 < j.size() ? ",\n" : "\n");
        }
        o << close << "]";
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (std::isfinite(v)) o << format_double(v);
        else o << '"' << format_double(v) << '"';
        return;
    }
    default: o << j.dump();
    }
}

} // namespace detail

// Pretty JSON with every float at 17 significant digits; inf/nan as strings.
inline std::string to_json_text(const json& j) {
    std::ostringstream o;
    detail::write_json(o, j, 0);
    o << "\n";
    return o.str();
}

inline json to_json(const TestReport& r) {
    json j;
    j["statistic"] = r.statistic_name;
    j["observed"] = r.observed;
    j["reference"] = r.reference;
    j["tolerance"] = r.tolerance;
    j["rule"] = r.rule;
    j["n_replicas"] = r.n_replicas;
    j["passed"] = r.passed;
    json rows = json::array();
    for (const auto& d : r.details) {
        json row;
        row["label"] = d.label;
        for (const auto& [k, v] : d.values) row[k] = v;
        row["passed"] = d.passed;
        rows.push_back(row);
    }
    j["details"] = rows;
    return j;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace betaedge
