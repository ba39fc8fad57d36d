#pragma once

// Corpus ingestion (one-string-per-line or FASTA), the JSON model file and the
// per-string assignment CSV.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "strlap/mixture.hpp"

namespace strlap::io {

enum class InputFormat { Lines, Fasta };

inline InputFormat parse_format(std::string_view name) {
    if (name == "lines")
        return InputFormat::Lines;
    if (name == "fasta")
        return InputFormat::Fasta;
    throw Error("unknown format '" + std::string(name) + "' (expected lines or fasta)");
}

struct Corpus {
    AlphabetPtr alphabet;
    std::vector<Str> strings;
    std::vector<std::string> ids;
};

struct RawRecord {
    std::string id;
    std::string text;
};

inline std::vector<RawRecord> read_records(std::istream& in, InputFormat format) {
    std::vector<RawRecord> recs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (format == InputFormat::Lines) {
            recs.push_back({std::to_string(lineno), line});
            continue;
        }
        if (!line.empty() && line.front() == '>') {
            std::string id = line.substr(1);
            if (auto sp = id.find_first_of(" \t"); sp != std::string::npos)
                id.resize(sp);
            recs.push_back({id, {}});
        } else if (!line.empty()) {
            if (recs.empty())
                throw Error("FASTA sequence data before the first header (line " + std::to_string(lineno) + ")");
            recs.back().text += line;
        }
    }
    return recs;
}

/// `alphabet` is an explicit list of single-character letters; when absent the
/// sorted set of characters seen in the input is used.
inline Corpus parse_corpus(std::istream& in, InputFormat format, std::optional<std::string> alphabet) {
    auto recs = read_records(in, format);
    if (recs.empty())
        throw Error("input contains no records");
    Corpus c;
    if (alphabet) {
        c.alphabet = Alphabet::from_chars(*alphabet);
    } else {
        std::set<char> seen;
        for (const auto& r : recs)
            seen.insert(r.text.begin(), r.text.end());
        if (seen.empty())
            throw Error("cannot infer an alphabet: every record is empty");
        c.alphabet = Alphabet::from_chars(std::string(seen.begin(), seen.end()));
    }
    std::set<std::string> ids;
    for (auto& r : recs) {
        if (!ids.insert(r.id).second)
            throw Error("duplicate record id '" + r.id + "'");
        try {
            c.strings.push_back(parse(r.text, c.alphabet));
        } catch (const Error& e) {
            throw Error("record '" + r.id + "': " + e.what());
        }
        c.ids.push_back(std::move(r.id));
    }
    return c;
}

inline Corpus ingest(const std::string& path, InputFormat format, std::optional<std::string> alphabet) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    return parse_corpus(in, format, std::move(alphabet));
}

// ---------------------------------------------------------------------------
// Model file
// ---------------------------------------------------------------------------

inline constexpr int kFormatVersion = 1;

struct FitMetadata {
    double epsilon = 0.05;
    std::uint64_t seed = 0;
    std::size_t restarts = 1;
    std::size_t iters = 0;
    double weighted_loglik = 0.0;
};

struct ModelFile {
    AlphabetPtr alphabet;
    DistanceKind metric = DistanceKind::ExtHamming;
    mixture::MixtureParams params;
    FitMetadata fit;
};

inline std::string alphabet_chars(const Alphabet& a) {
    std::string s;
    for (const auto& l : a.letters())
        s += l;
    return s;
}

inline nlohmann::ordered_json to_json(const ModelFile& m) {
    if (!m.alphabet->single_char())
        throw Error("model files require single-character letters");
    nlohmann::ordered_json j;
    j["format_version"] = kFormatVersion;
    j["alphabet"] = m.alphabet->letters();
    j["metric"] = std::string(to_string(m.metric));
    j["k"] = m.params.k();
    auto comps = nlohmann::ordered_json::array();
    for (std::size_t g = 0; g < m.params.k(); ++g) {
        nlohmann::ordered_json c;
        c["pi"] = m.params.pi[g];
        c["lambda"] = to_text(m.params.lambda[g]);
        c["rho"] = m.params.rho[g];
        comps.push_back(std::move(c));
    }
    j["components"] = std::move(comps);
    j["fit"] = {{"epsilon", m.fit.epsilon},
                {"seed", m.fit.seed},
                {"restarts", m.fit.restarts},
                {"iters", m.fit.iters},
                {"weighted_loglik", m.fit.weighted_loglik}};
    return j;
}

inline ModelFile model_from_json(const nlohmann::ordered_json& j) {
    try {
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw Error("unsupported model format_version");
        ModelFile m;
        auto letters = j.at("alphabet").get<std::vector<std::string>>();
        m.alphabet = std::make_shared<const Alphabet>(std::move(letters));
        if (!m.alphabet->single_char())
            throw Error("model alphabet letters must be single characters");
        m.metric = parse_distance_kind(j.at("metric").get<std::string>());
        const auto k = j.at("k").get<std::size_t>();
        const auto& comps = j.at("components");
        if (comps.size() != k)
            throw Error("model k does not match the number of components");
        for (const auto& c : comps) {
            m.params.pi.push_back(c.at("pi").get<double>());
            m.params.lambda.push_back(parse(c.at("lambda").get<std::string>(), m.alphabet));
            m.params.rho.push_back(c.at("rho").get<double>());
        }
        m.params.validate();
        const auto& f = j.at("fit");
        m.fit.epsilon = f.at("epsilon").get<double>();
        m.fit.seed = f.at("seed").get<std::uint64_t>();
        m.fit.restarts = f.at("restarts").get<std::size_t>();
        m.fit.iters = f.at("iters").get<std::size_t>();
        m.fit.weighted_loglik = f.at("weighted_loglik").get<double>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed model file: ") + e.what());
    }
}

inline std::string dump_model(const ModelFile& m) { return to_json(m).dump(2) + "\n"; }

inline ModelFile parse_model(std::string_view text) {
    try {
        return model_from_json(nlohmann::ordered_json::parse(text));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("model file is not valid JSON: ") + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write '" + path + "'");
    out << content;
    if (!out)
        throw Error("failed writing '" + path + "'");
}

inline void save_model(const std::string& path, const ModelFile& m) { write_file(path, dump_model(m)); }
inline ModelFile load_model(const std::string& path) { return parse_model(read_file(path)); }

// ---------------------------------------------------------------------------
// Assignment CSV: id,component,posterior_1..posterior_k (components 1-based)
// ---------------------------------------------------------------------------

inline std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string assignments_csv(const std::vector<std::string>& ids,
                                   const std::vector<mixture::Assignment>& assign, std::size_t k) {
    std::string out = "id,component";
    for (std::size_t g = 1; g <= k; ++g)
        out += ",posterior_" + std::to_string(g);
    out += "\n";
    for (std::size_t i = 0; i < assign.size(); ++i) {
        out += ids[i] + "," + std::to_string(assign[i].component + 1);
        for (double p : assign[i].posterior)
            out += "," + format_real(p);
        out += "\n";
    }
    return out;
}

} // namespace strlap::io
