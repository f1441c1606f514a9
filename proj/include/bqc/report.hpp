#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <bqc/version.hpp>

#include "bqc/rng.hpp"

namespace bqc::report {

// Deterministic number formatting so identical runs emit identical bytes.
inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

struct Stamp {
    uint64_t seed = 0;
    uint64_t config_hash = 0;

    static Stamp make(uint64_t seed, const nlohmann::json& config) {
        return Stamp{seed, fnv1a(config.dump())};
    }
    std::string header_comment() const {
        std::ostringstream os;
        os << "# git=" << kGitDescribe << " seed=" << seed << " config_hash=" << std::hex
           << config_hash << std::dec;
        return os.str();
    }
    nlohmann::json to_json() const {
        return nlohmann::json{{"git", kGitDescribe}, {"seed", seed},
                              {"config_hash", config_hash}};
    }
};

class CsvWriter {
public:
    CsvWriter(const std::string& path, const Stamp& stamp, const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw std::runtime_error("cannot open output file " + path);
        out_ << stamp.header_comment() << "\n";
        for (size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

inline void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << j.dump(2) << "\n";
}

}  // namespace bqc::report
