#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "monoscore/common.hpp"

namespace mono {

inline constexpr const char* kNullToken = "NULL";
inline constexpr const char* kFieldSep = " ||| ";

/// One Moses-format phrase-table row. Fields past the alignment are kept
/// verbatim in raw_extras so rewriting never loses information.
struct PhrasePair {
    std::vector<std::string> src;
    std::vector<std::string> tgt;
    std::vector<double> scores;                    // finite, >= 0; count not fixed
    std::vector<std::pair<int, int>> alignment;    // zero-based (src index, tgt index)
    std::string raw_extras;                        // " ||| "-joined trailing fields
};

struct ParseLimits {
    int max_phrase_length = 6;
};

/// Parses "src ||| tgt ||| s1 .. sk [||| i-j ...] [||| extras]".
/// Throws DataError on malformed input.
PhrasePair parse_phrase_table_line(const std::string& line, const ParseLimits& limits = {});

/// Exact inverse of parse_phrase_table_line on canonical lines; scores are
/// rendered with 6 significant digits, the alignment field appears iff the
/// alignment is non-empty.
std::string emit_phrase_table_line(const PhrasePair& p);

/// Lexical translation table row; f or e (not both) may be the NULL marker.
struct LexiconEntry {
    std::string f;
    std::string e;
    double p = 0.0;  // in [0, 1]
};

/// Reads "f e p" lines. Throws DataError (with line number) on malformed
/// rows, out-of-range probability, or a duplicate (f, e) pair.
std::vector<LexiconEntry> parse_lexicon(const std::string& path);

struct StreamError {
    std::size_t line_no = 0;
    std::string message;
};

struct StreamSummary {
    std::size_t lines_read = 0;
    std::size_t parsed = 0;
    std::vector<StreamError> errors;
};

/// Streams a phrase table line by line in constant memory. Malformed lines
/// are recorded, not fatal, until `error_cap` is exceeded (then DataError).
/// The callback receives each valid pair with its 1-based line number.
StreamSummary stream_table(const std::string& path,
                           const std::function<void(PhrasePair&&, std::size_t)>& callback,
                           std::size_t error_cap = 100,
                           const ParseLimits& limits = {});

}  // namespace mono
