#include "monoscore/phrasetable.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mono {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    const std::string sep = kFieldSep;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + sep.size();
    }
    return fields;
}

std::vector<std::string> split_tokens(const std::string& field) {
    std::vector<std::string> tokens;
    std::istringstream ss(field);
    std::string t;
    while (ss >> t) tokens.push_back(t);
    return tokens;
}

double parse_number(const std::string& s, const char* what) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw DataError(std::string("non-numeric ") + what + " '" + s + "'");
    }
    if (pos != s.size()) throw DataError(std::string("non-numeric ") + what + " '" + s + "'");
    return v;
}

void check_phrase(const std::vector<std::string>& tokens, const char* side,
                  const ParseLimits& limits) {
    if (tokens.empty()) throw DataError(std::string("empty ") + side + " phrase");
    if (static_cast<int>(tokens.size()) > limits.max_phrase_length)
        throw DataError(std::string(side) + " phrase exceeds max length " +
                        std::to_string(limits.max_phrase_length));
    for (const auto& t : tokens)
        if (t.find("|||") != std::string::npos)
            throw DataError("token '" + t + "' contains '|||'");
}

}  // namespace

PhrasePair parse_phrase_table_line(const std::string& line, const ParseLimits& limits) {
    auto fields = split_fields(line);
    if (fields.size() < 3)
        throw DataError("expected at least 3 '|||'-separated fields, got " +
                        std::to_string(fields.size()));

    PhrasePair p;
    p.src = split_tokens(fields[0]);
    p.tgt = split_tokens(fields[1]);
    check_phrase(p.src, "source", limits);
    check_phrase(p.tgt, "target", limits);

    for (const auto& s : split_tokens(fields[2])) {
        double v = parse_number(s, "score");
        if (!std::isfinite(v) || v < 0.0) throw DataError("score '" + s + "' not finite and >= 0");
        p.scores.push_back(v);
    }

    if (fields.size() >= 4) {
        for (const auto& link : split_tokens(fields[3])) {
            std::size_t dash = link.find('-');
            if (dash == std::string::npos || dash == 0 || dash + 1 == link.size())
                throw DataError("malformed alignment token '" + link + "'");
            int i, j;
            try {
                std::size_t pi = 0, pj = 0;
                i = std::stoi(link.substr(0, dash), &pi);
                j = std::stoi(link.substr(dash + 1), &pj);
                if (pi != dash || pj != link.size() - dash - 1) throw std::invalid_argument(link);
            } catch (const std::exception&) {
                throw DataError("malformed alignment token '" + link + "'");
            }
            if (i < 0 || i >= static_cast<int>(p.src.size()) || j < 0 ||
                j >= static_cast<int>(p.tgt.size()))
                throw DataError("alignment link " + link + " out of range for " +
                                std::to_string(p.src.size()) + "x" + std::to_string(p.tgt.size()) +
                                " phrase pair");
            p.alignment.emplace_back(i, j);
        }
    }

    if (fields.size() > 4) {
        std::string extras;
        for (std::size_t k = 4; k < fields.size(); ++k) {
            if (k > 4) extras += kFieldSep;
            extras += fields[k];
        }
        p.raw_extras = extras;
    }
    return p;
}

std::string emit_phrase_table_line(const PhrasePair& p) {
    std::string line;
    for (std::size_t i = 0; i < p.src.size(); ++i) {
        if (i) line += ' ';
        line += p.src[i];
    }
    line += kFieldSep;
    for (std::size_t i = 0; i < p.tgt.size(); ++i) {
        if (i) line += ' ';
        line += p.tgt[i];
    }
    line += kFieldSep;
    for (std::size_t i = 0; i < p.scores.size(); ++i) {
        if (i) line += ' ';
        line += fmt_sig6(p.scores[i]);
    }
    if (!p.alignment.empty()) {
        line += kFieldSep;
        for (std::size_t i = 0; i < p.alignment.size(); ++i) {
            if (i) line += ' ';
            line += std::to_string(p.alignment[i].first) + "-" +
                    std::to_string(p.alignment[i].second);
        }
    }
    if (!p.raw_extras.empty()) {
        line += kFieldSep;
        line += p.raw_extras;
    }
    return line;
}

std::vector<LexiconEntry> parse_lexicon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon: " + path);
    std::vector<LexiconEntry> entries;
    std::map<std::pair<std::string, std::string>, std::size_t> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_tokens(line);
        if (fields.size() != 3)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected 'f e p', got " +
                            std::to_string(fields.size()) + " fields");
        LexiconEntry entry{fields[0], fields[1], parse_number(fields[2], "probability")};
        if (entry.p < 0.0 || entry.p > 1.0)
            throw DataError(path + ":" + std::to_string(line_no) + ": probability " + fields[2] +
                            " outside [0,1]");
        if (entry.f == kNullToken && entry.e == kNullToken)
            throw DataError(path + ":" + std::to_string(line_no) + ": both sides NULL");
        auto [it, inserted] = seen.emplace(std::make_pair(entry.f, entry.e), line_no);
        if (!inserted)
            throw DataError(path + ":" + std::to_string(line_no) + ": duplicate pair (" + entry.f +
                            ", " + entry.e + "), first seen at line " + std::to_string(it->second));
        entries.push_back(std::move(entry));
    }
    return entries;
}

StreamSummary stream_table(const std::string& path,
                           const std::function<void(PhrasePair&&, std::size_t)>& callback,
                           std::size_t error_cap, const ParseLimits& limits) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open phrase table: " + path);
    StreamSummary summary;
    std::string line;
    while (std::getline(in, line)) {
        ++summary.lines_read;
        if (line.empty()) continue;
        try {
            PhrasePair p = parse_phrase_table_line(line, limits);
            ++summary.parsed;
            callback(std::move(p), summary.lines_read);
        } catch (const DataError& e) {
            summary.errors.push_back({summary.lines_read, e.what()});
            if (summary.errors.size() > error_cap)
                throw DataError(path + ": parse error cap (" + std::to_string(error_cap) +
                                ") exceeded at line " + std::to_string(summary.lines_read));
        }
    }
    return summary;
}

}  // namespace mono
