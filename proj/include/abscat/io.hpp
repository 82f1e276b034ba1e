// abscat: Aharonov-Bohm scattering off a magnetic vortex in conical space.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// CSV and JSON emission. CSV files are UTF-8 with LF line endings: '#'
// key=value metadata lines (a valid flat config file when the keys are CLI
// flags), one column header, then rows with numbers at 17 significant
// digits so golden-file comparisons are stable.

#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "abscat/core.hpp"
#include "abscat/validate.hpp"

namespace abscat {

using KvList = std::vector<std::pair<std::string, std::string>>;

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write failed for '" + path + "'");
}

/// `config` lines are emitted as `# key=value` (stripping the leading "# "
/// yields a config file that reproduces the run); `info` lines use `##` so
/// they stay comments after that strip.
inline std::string render_csv(const KvList& config, const KvList& info, const std::string& header,
                              const std::vector<std::vector<std::string>>& rows) {
    std::string s;
    for (const auto& [k, v] : config) {
        s += "# ";
        s += k;
        s += "=";
        s += v;
        s += "\n";
    }
    for (const auto& [k, v] : info) {
        s += "## ";
        s += k;
        s += "=";
        s += v;
        s += "\n";
    }
    s += header;
    s += "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) s += ",";
            s += row[i];
        }
        s += "\n";
    }
    return s;
}

inline std::string cross_section_csv(const CrossSectionTable& t, const KvList& run_meta,
                                     const KvList& extra_info = {}) {
    KvList info = extra_info;
    for (const auto& kv : t.metadata) info.push_back(kv);
    info.emplace_back("integrated_dsigma", fmt17(t.integrated));
    std::vector<std::vector<std::string>> rows;
    rows.reserve(t.rows.size());
    for (const auto& r : t.rows) rows.push_back({fmt17(r.phi), fmt17(r.value), t.tier, r.flag});
    return render_csv(run_meta, info, "phi,dsigma_dphi,tier,flag", rows);
}

inline nlohmann::ordered_json check_to_json(const CheckEntry& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["reference"] = c.reference;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : c.metadata) meta[k] = v;
    j["metadata"] = meta;
    return j;
}

}  // namespace abscat
