#include <doctest.h>

#include <filesystem>
#include <random>

#include "cdmaseq/sequence_io.hpp"
#include "cdmaseq/sequences.hpp"
#include "oracles.hpp"

using namespace cdmaseq;

TEST_CASE("serialize/parse round trip is bit exact") {
    std::mt19937_64 rng(67);
    std::vector<ChipSequence> seqs;
    for (int k = 0; k < 3; ++k) seqs.push_back({oracle::random_complex(13, rng), "rand" + std::to_string(k)});
    seqs[0].entries(4) = Complex{1e-300, -0.1};
    const SequenceSet set = make_sequence_set(seqs);
    const SequenceSet back = parse_sequence_set(serialize(set));
    CHECK(back.format_version == 1);
    CHECK(back.n_chips == 13);
    REQUIRE(back.sequences.size() == 3);
    for (int k = 0; k < 3; ++k) {
        CHECK(back.sequences[k].label == seqs[k].label);
        CHECK((back.sequences[k].entries - seqs[k].entries).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(serialize(back) == serialize(set));
}

TEST_CASE("file round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "cdmaseq_io_test";
    std::filesystem::create_directories(dir);
    const SequenceSet set = make_sequence_set(gold_family(5));
    write_sequence_set(dir / "gold.json", set);
    const SequenceSet back = read_sequence_set(dir / "gold.json");
    CHECK(back.sequences.size() == 33);
    CHECK(back.sequences[32].label == set.sequences[32].label);
    CHECK_THROWS_AS(read_sequence_set(dir / "missing.json"), FormatError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("malformed inputs are rejected") {
    CHECK_THROWS_AS(make_sequence_set({}), FormatError);
    CHECK_THROWS_AS(make_sequence_set({fzc_sequence(31, 1), fzc_sequence(16, 1)}), FormatError);
    CHECK_THROWS_AS(parse_sequence_set("not json"), FormatError);
    CHECK_THROWS_AS(parse_sequence_set(R"({"format_version": 2, "n_chips": 2, "sequences": []})"), FormatError);
    CHECK_THROWS_AS(parse_sequence_set(R"({"format_version": 1, "n_chips": 2, "sequences": []})"), FormatError);
    CHECK_THROWS_AS(
        parse_sequence_set(
            R"({"format_version": 1, "n_chips": 2, "sequences": [{"label": "x", "entries": [[1, 0]]}]})"),
        FormatError);
    CHECK_THROWS_AS(
        parse_sequence_set(
            R"({"format_version": 1, "n_chips": 2, "sequences": [{"label": "x", "entries": [[1, 0], [1]]}]})"),
        FormatError);
    const SequenceSet ok = parse_sequence_set(
        R"({"format_version": 1, "n_chips": 2, "sequences": [{"label": "x", "entries": [[1, 0], [0, -1]]}]})");
    CHECK(ok.sequences[0].entries(1) == Complex{0.0, -1.0});
}
