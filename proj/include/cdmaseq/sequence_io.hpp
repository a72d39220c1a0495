#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdmaseq/types.hpp"

namespace cdmaseq {

inline constexpr int kSequenceFormatVersion = 1;

/// On-disk set of equal-length sequences:
///   {"format_version": 1, "n_chips": N,
///    "sequences": [{"label": "...", "entries": [[re, im], ...]}, ...]}
struct SequenceSet {
    int format_version = kSequenceFormatVersion;
    int n_chips = 0;
    std::vector<ChipSequence> sequences;
};

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builds a set, checking that all sequences share one length.
SequenceSet make_sequence_set(std::vector<ChipSequence> sequences);

/// Doubles are written in shortest round-trip form, so
/// parse(serialize(x)) reproduces every bit of x.
std::string serialize(const SequenceSet& set);
SequenceSet parse_sequence_set(const std::string& text);

void write_sequence_set(const std::filesystem::path& path, const SequenceSet& set);
SequenceSet read_sequence_set(const std::filesystem::path& path);

}  // namespace cdmaseq
