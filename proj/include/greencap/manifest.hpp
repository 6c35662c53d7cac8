#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "greencap/corpus.hpp"
#include "greencap/errors.hpp"
#include "greencap/metrics.hpp"

namespace greencap {

/// One code variant to evaluate: who produced it, for which problem, under
/// which prompt, and where its executable lives.
struct VariantDescriptor {
    std::string method;
    std::string problem;
    PromptClass prompt = PromptClass::Init;
    std::filesystem::path exec_path;
    std::string label;

    std::string key() const {
        return method + "/" + problem + "/" + std::string(to_string(prompt));
    }
};

struct Manifest {
    std::vector<VariantDescriptor> variants;
    /// Per-problem pinned iteration counts; a pin overrides calibration for
    /// every variant of that problem.
    std::map<std::string, std::uint32_t> iterations;
};

namespace detail_manifest {

inline bool valid_identifier(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

}  // namespace detail_manifest

/// Parse and validate a variants manifest. With require_exec (the default)
/// every exec_path must exist and be executable; replay-driven runs never
/// spawn the variants and pass false.
inline Manifest load_manifest(const std::filesystem::path& path, bool require_exec = true) {
    std::ifstream in(path);
    if (!in) throw PathError("manifest not readable: " + path.string());
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw ManifestError("manifest " + path.string() + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("variants") || !doc["variants"].is_array())
        throw ManifestError("manifest " + path.string() + ": needs a top-level variants list");

    const std::filesystem::path base = path.has_parent_path()
                                           ? path.parent_path()
                                           : std::filesystem::path(".");

    Manifest manifest;
    std::set<std::string> seen;
    std::size_t index = 0;
    for (const auto& entry : doc["variants"]) {
        const std::string where = "variant #" + std::to_string(index);
        ++index;
        if (!entry.is_object())
            throw ManifestError("manifest " + path.string() + ": " + where +
                                ": not an object");
        for (const char* field : {"method", "problem", "prompt", "path"})
            if (!entry.contains(field) || !entry[field].is_string())
                throw ManifestError("manifest " + path.string() + ": " + where +
                                    ": missing string field '" + field + "'");

        VariantDescriptor v;
        v.method = entry["method"].get<std::string>();
        v.problem = entry["problem"].get<std::string>();
        if (!detail_manifest::valid_identifier(v.method))
            throw ManifestError("manifest " + path.string() + ": " + where +
                                ": method must match [a-z0-9_]+, got '" + v.method + "'");
        try {
            problem_by_name(v.problem);
        } catch (const InvalidInput&) {
            throw ManifestError("manifest " + path.string() + ": " + where +
                                ": unknown problem '" + v.problem + "'");
        }
        try {
            v.prompt = prompt_class_from_string(entry["prompt"].get<std::string>());
        } catch (const Error&) {
            throw ManifestError("manifest " + path.string() + ": " + where +
                                ": unknown prompt '" +
                                entry["prompt"].get<std::string>() + "'");
        }
        std::filesystem::path exec = entry["path"].get<std::string>();
        if (exec.is_relative()) exec = base / exec;
        v.exec_path = exec.lexically_normal();
        if (entry.contains("label")) {
            if (!entry["label"].is_string())
                throw ManifestError("manifest " + path.string() + ": " + where +
                                    ": label must be a string");
            v.label = entry["label"].get<std::string>();
        }

        if (!seen.insert(v.key()).second)
            throw ManifestError("manifest " + path.string() + ": duplicate variant triple " +
                                v.key());
        if (require_exec) {
            if (!std::filesystem::exists(v.exec_path))
                throw PathError("manifest " + path.string() + ": " + where +
                                ": executable missing: " + v.exec_path.string());
            if (::access(v.exec_path.c_str(), X_OK) != 0)
                throw PathError("manifest " + path.string() + ": " + where +
                                ": not executable: " + v.exec_path.string());
        }
        manifest.variants.push_back(std::move(v));
    }

    if (doc.contains("iterations")) {
        if (!doc["iterations"].is_object())
            throw ManifestError("manifest " + path.string() +
                                ": iterations must map problem -> count");
        for (const auto& [problem, count] : doc["iterations"].items()) {
            try {
                problem_by_name(problem);
            } catch (const InvalidInput&) {
                throw ManifestError("manifest " + path.string() +
                                    ": iterations names unknown problem '" + problem + "'");
            }
            if (!count.is_number_unsigned() || count.get<std::uint64_t>() < 1 ||
                count.get<std::uint64_t>() > 1000000)
                throw ManifestError("manifest " + path.string() + ": iterations for " +
                                    problem + " must be an integer in [1, 1000000]");
            manifest.iterations[problem] = count.get<std::uint32_t>();
        }
    }
    return manifest;
}

}  // namespace greencap
