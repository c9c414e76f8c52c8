#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "monoscore/phrasetable.hpp"
#include "test_util.hpp"

using namespace mono;
using testutil::write_file;

TEST_CASE("parse a canonical 4-field line") {
    auto p = parse_phrase_table_line("la casa ||| the house ||| 0.5 0.4 0.6 0.3 ||| 0-0 1-1");
    CHECK(p.src == std::vector<std::string>{"la", "casa"});
    CHECK(p.tgt == std::vector<std::string>{"the", "house"});
    CHECK(p.scores == std::vector<double>{0.5, 0.4, 0.6, 0.3});
    CHECK(p.alignment == std::vector<std::pair<int, int>>{{0, 0}, {1, 1}});
    CHECK(p.raw_extras.empty());
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_phrase_table_line("a ||| b"), DataError);          // missing scores
    CHECK_THROWS_AS(parse_phrase_table_line("a ||| b ||| x"), DataError);    // non-numeric
    CHECK_THROWS_AS(parse_phrase_table_line("a ||| b ||| -1"), DataError);   // negative score
    CHECK_THROWS_AS(parse_phrase_table_line("a ||| b ||| 1 ||| 0:0"), DataError);
    CHECK_THROWS_AS(parse_phrase_table_line("a ||| b ||| 1 ||| 0-5"), DataError);  // out of range
    CHECK_THROWS_AS(parse_phrase_table_line(" ||| b ||| 1"), DataError);     // empty source
    CHECK_THROWS_AS(parse_phrase_table_line("a b c d e f g ||| b ||| 1"), DataError);  // too long
}

TEST_CASE("empty scores field parses to zero scores") {
    auto p = parse_phrase_table_line("a ||| b ||| ");
    CHECK(p.scores.empty());
    CHECK(emit_phrase_table_line(p) == "a ||| b ||| ");
}

TEST_CASE("emit: alignment field only when non-empty, extras verbatim") {
    PhrasePair p;
    p.src = {"la", "casa"};
    p.tgt = {"the", "house"};
    p.scores = {0.5, 0.4, 0.6, 0.3};
    CHECK(emit_phrase_table_line(p) == "la casa ||| the house ||| 0.5 0.4 0.6 0.3");

    p.alignment = {{0, 0}, {1, 1}};
    CHECK(emit_phrase_table_line(p) == "la casa ||| the house ||| 0.5 0.4 0.6 0.3 ||| 0-0 1-1");

    p.raw_extras = "2 3 1";
    CHECK(emit_phrase_table_line(p) ==
          "la casa ||| the house ||| 0.5 0.4 0.6 0.3 ||| 0-0 1-1 ||| 2 3 1");
}

namespace {

PhrasePair random_pair(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 6);
    std::uniform_int_distribution<int> nscores(0, 8);
    std::uniform_real_distribution<double> score(0.0, 1.0);
    std::uniform_int_distribution<int> coin(0, 1);
    PhrasePair p;
    int sl = len(rng), tl = len(rng);
    for (int i = 0; i < sl; ++i) p.src.push_back("s" + std::to_string(rng() % 50));
    for (int j = 0; j < tl; ++j) p.tgt.push_back("t" + std::to_string(rng() % 50));
    int k = nscores(rng);
    for (int i = 0; i < k; ++i) p.scores.push_back(score(rng));
    if (coin(rng)) {
        std::uniform_int_distribution<int> si(0, sl - 1), tj(0, tl - 1);
        std::set<std::pair<int, int>> links;
        int nlinks = 1 + static_cast<int>(rng() % 4);
        for (int l = 0; l < nlinks; ++l) links.emplace(si(rng), tj(rng));
        p.alignment.assign(links.begin(), links.end());
    }
    if (coin(rng) && !p.alignment.empty()) p.raw_extras = "1 2 " + std::to_string(rng() % 9);
    return p;
}

}  // namespace

TEST_CASE("parse/emit round-trip on 1000 random valid pairs") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 1000; ++i) {
        PhrasePair p = random_pair(rng);
        std::string line = emit_phrase_table_line(p);
        PhrasePair q = parse_phrase_table_line(line);
        CHECK(q.src == p.src);
        CHECK(q.tgt == p.tgt);
        CHECK(q.alignment == p.alignment);
        CHECK(q.raw_extras == p.raw_extras);
        REQUIRE(q.scores.size() == p.scores.size());
        for (std::size_t s = 0; s < p.scores.size(); ++s)
            CHECK(q.scores[s] == doctest::Approx(p.scores[s]).epsilon(1e-5));
        // emit∘parse is the identity on canonical lines
        CHECK(emit_phrase_table_line(q) == line);
    }
}

TEST_CASE("fuzzed corruption always errors or yields a valid pair") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        std::string line = emit_phrase_table_line(random_pair(rng));
        // Corrupt a random slice.
        if (!line.empty()) {
            std::size_t pos = rng() % line.size();
            std::size_t n = 1 + rng() % 4;
            line.erase(pos, std::min(n, line.size() - pos));
        }
        try {
            PhrasePair p = parse_phrase_table_line(line);
            for (auto [a, b] : p.alignment) {
                CHECK(a >= 0);
                CHECK(a < static_cast<int>(p.src.size()));
                CHECK(b >= 0);
                CHECK(b < static_cast<int>(p.tgt.size()));
            }
            for (double s : p.scores) CHECK(s >= 0.0);
        } catch (const DataError&) {
            // rejected, fine
        }
    }
}

TEST_CASE("parse_lexicon basics") {
    auto path = write_file("lex.txt", "casa house 0.7\nNULL house 0.01\nperro dog 1\n");
    auto entries = parse_lexicon(path);
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].f == "casa");
    CHECK(entries[0].p == doctest::Approx(0.7));
    CHECK(entries[1].f == kNullToken);

    CHECK_THROWS_WITH_AS(
        (void)parse_lexicon(write_file("lex_bad_p.txt", "casa house 1.5\n")),
        doctest::Contains(":1:"), DataError);
    CHECK_THROWS_AS((void)parse_lexicon(write_file("lex_fields.txt", "casa house\n")), DataError);
    CHECK_THROWS_AS(
        (void)parse_lexicon(write_file("lex_dup.txt", "a b 0.5\na b 0.6\n")), DataError);
    CHECK_THROWS_AS(
        (void)parse_lexicon(write_file("lex_nullnull.txt", "NULL NULL 0.5\n")), DataError);
}

TEST_CASE("stream_table: valid file, callbacks in order") {
    auto path = write_file("table3.pt",
                           "a ||| x ||| 0.1\n"
                           "b ||| y ||| 0.2\n"
                           "c ||| z ||| 0.3\n");
    std::vector<std::size_t> lines;
    auto summary = stream_table(path, [&](PhrasePair&&, std::size_t line_no) {
        lines.push_back(line_no);
    });
    CHECK(summary.lines_read == 3);
    CHECK(summary.parsed == 3);
    CHECK(summary.errors.empty());
    CHECK(lines == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("stream_table: malformed lines recorded, not fatal") {
    std::ostringstream table;
    for (int i = 0; i < 10; ++i) {
        if (i == 4)
            table << "broken line without separators\n";
        else
            table << "a ||| x ||| 0." << i << "\n";
    }
    auto path = write_file("table_bad.pt", table.str());
    int callbacks = 0;
    auto summary = stream_table(path, [&](PhrasePair&&, std::size_t) { ++callbacks; });
    CHECK(callbacks == 9);
    REQUIRE(summary.errors.size() == 1);
    CHECK(summary.errors[0].line_no == 5);
}

TEST_CASE("stream_table: error cap enforced") {
    std::string bad;
    for (int i = 0; i < 10; ++i) bad += "nonsense\n";
    auto path = write_file("table_cap.pt", bad);
    CHECK_THROWS_AS(stream_table(path, [](PhrasePair&&, std::size_t) {}, 3), DataError);
}

TEST_CASE("stream_table: unreadable file") {
    CHECK_THROWS_AS(stream_table("/no/such/file.pt", [](PhrasePair&&, std::size_t) {}), DataError);
}
