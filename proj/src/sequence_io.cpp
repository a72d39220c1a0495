#include "cdmaseq/sequence_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cdmaseq {

using nlohmann::json;

SequenceSet make_sequence_set(std::vector<ChipSequence> sequences) {
    if (sequences.empty()) throw FormatError("sequence set is empty");
    SequenceSet set;
    set.n_chips = sequences.front().size();
    for (const auto& s : sequences)
        if (s.size() != set.n_chips)
            throw FormatError("sequence '" + s.label + "' has length " + std::to_string(s.size()) +
                              ", expected " + std::to_string(set.n_chips));
    set.sequences = std::move(sequences);
    return set;
}

std::string serialize(const SequenceSet& set) {
    json doc;
    doc["format_version"] = set.format_version;
    doc["n_chips"] = set.n_chips;
    json seqs = json::array();
    for (const auto& s : set.sequences) {
        json entries = json::array();
        for (Eigen::Index n = 0; n < s.entries.size(); ++n)
            entries.push_back({s.entries(n).real(), s.entries(n).imag()});
        seqs.push_back({{"label", s.label}, {"entries", std::move(entries)}});
    }
    doc["sequences"] = std::move(seqs);
    return doc.dump(1) + "\n";
}

SequenceSet parse_sequence_set(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    try {
        SequenceSet set;
        set.format_version = doc.at("format_version").get<int>();
        if (set.format_version != kSequenceFormatVersion)
            throw FormatError("unsupported format_version " + std::to_string(set.format_version));
        set.n_chips = doc.at("n_chips").get<int>();
        if (set.n_chips < 2) throw FormatError("n_chips must be >= 2");
        for (const auto& item : doc.at("sequences")) {
            ChipSequence s;
            s.label = item.at("label").get<std::string>();
            const auto& entries = item.at("entries");
            if (static_cast<int>(entries.size()) != set.n_chips)
                throw FormatError("sequence '" + s.label + "' does not have n_chips entries");
            s.entries.resize(set.n_chips);
            for (int n = 0; n < set.n_chips; ++n) {
                const auto& pair = entries.at(n);
                if (!pair.is_array() || pair.size() != 2) throw FormatError("entry is not a [re, im] pair");
                const double re = pair.at(0).get<double>();
                const double im = pair.at(1).get<double>();
                if (!std::isfinite(re) || !std::isfinite(im)) throw FormatError("non-finite entry");
                s.entries(n) = Complex{re, im};
            }
            set.sequences.push_back(std::move(s));
        }
        if (set.sequences.empty()) throw FormatError("file holds no sequences");
        return set;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed sequence file: ") + e.what());
    }
}

void write_sequence_set(const std::filesystem::path& path, const SequenceSet& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << serialize(set);
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

SequenceSet read_sequence_set(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sequence_set(buf.str());
}

}  // namespace cdmaseq
