#ifndef TRUNCVOTE_TEXT_FORMAT_HPP
#define TRUNCVOTE_TEXT_FORMAT_HPP

#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "rational.hpp"
#include "reductions.hpp"
#include "rules.hpp"
#include "uncertainty.hpp"

/*
 * Profile files
 *
 *   # comment
 *   candidates: a, b, p
 *   manipulators: 3, 3          (optional)
 *   3: a > b > p                (weight: ballot)
 *   partial:                    (later vote lines are revealed prefixes)
 *   probabilistic:              (later lines are  w: ballot ? prob | ballot ? prob)
 *
 * A file whose vote lines contain '?' is probabilistic without the header.
 * Ballots ranking all but one candidate are completed on input.
 */

namespace truncvote {

using DocumentBody = std::variant<Profile, PartialProfile, ProbabilisticInstance>;

struct ProfileDocument {
    std::vector<std::string> names;
    DocumentBody body;
    std::optional<std::vector<Weight>> manipulators;

    int m() const noexcept { return static_cast<int>(names.size()); }
};

namespace detail {

struct Cursor {
    std::string_view text;
    int line;
    std::size_t pos = 0;

    int column() const noexcept { return static_cast<int>(pos) + 1; }
    bool done() const noexcept { return pos >= text.size(); }
    void skip_space() {
        while (!done() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\r')) ++pos;
    }
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, column()); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
        throw ParseError(msg, line, static_cast<int>(at) + 1);
    }
    bool accept(char c) {
        skip_space();
        if (!done() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }
    /// Token up to whitespace or one of the grammar's punctuation characters.
    std::string_view token() {
        skip_space();
        const std::size_t start = pos;
        while (!done() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               std::string_view(",>:?|#").find(text[pos]) == std::string_view::npos) {
            ++pos;
        }
        if (start == pos) fail("expected a value");
        return text.substr(start, pos - start);
    }
};

inline bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || std::string_view(",>:?|#").find(c) != std::string_view::npos) {
            return false;
        }
    }
    return true;
}

inline Weight parse_weight(Cursor& cur) {
    cur.skip_space();
    const std::size_t at = cur.pos;
    const std::string_view t = cur.token();
    Rational r;
    try {
        r = Rational::parse(t);
    } catch (const std::exception&) {
        cur.fail_at("malformed weight '" + std::string(t) + "'", at);
    }
    if (!r.is_integer() || r < 0) cur.fail_at("weights are non-negative integers", at);
    return r.num();
}

inline Rational parse_probability(Cursor& cur) {
    cur.skip_space();
    const std::size_t at = cur.pos;
    const std::string_view t = cur.token();
    try {
        return Rational::parse(t);
    } catch (const std::exception&) {
        cur.fail_at("malformed probability '" + std::string(t) + "'", at);
    }
}

inline TopOrder parse_ballot(Cursor& cur, const std::vector<std::string>& names) {
    std::vector<CandidateId> ranked;
    do {
        cur.skip_space();
        const std::size_t at = cur.pos;
        const std::string_view t = cur.token();
        const auto it = std::find(names.begin(), names.end(), t);
        if (it == names.end()) cur.fail_at("unknown candidate '" + std::string(t) + "'", at);
        ranked.push_back(CandidateId{static_cast<int>(it - names.begin())});
    } while (cur.accept('>'));
    return canonicalize_ballot(TopOrder(std::move(ranked), static_cast<int>(names.size())));
}

inline void expect_end(Cursor& cur) {
    cur.skip_space();
    if (!cur.done()) cur.fail("unexpected trailing text");
}

inline std::string_view strip_comment(std::string_view line) {
    const auto hash = line.find('#');
    return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline bool blank(std::string_view s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

/// Keyword line such as "candidates:" (true when matched; the cursor then sits after the colon).
inline bool keyword(Cursor& cur, std::string_view word) {
    cur.skip_space();
    const std::size_t start = cur.pos;
    if (cur.text.substr(start, word.size()) != word) return false;
    Cursor probe = cur;
    probe.pos = start + word.size();
    if (!probe.accept(':')) return false;
    cur = probe;
    return true;
}

} // namespace detail

inline ProfileDocument parse_profile(std::string_view text) {
    enum class Mode { Unset, Complete, Partial, Probabilistic } mode = Mode::Unset;
    std::optional<std::vector<std::string>> names;
    std::optional<std::vector<Weight>> manipulators;
    std::vector<WeightedVote> votes;
    std::vector<PartialVote> partial;
    std::vector<VoterDistribution> prob;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        detail::Cursor cur{detail::strip_comment(text.substr(start, end - start)), line_no};
        start = end + 1;
        if (detail::blank(cur.text)) continue;

        if (detail::keyword(cur, "candidates")) {
            if (names) cur.fail("duplicate candidates line");
            std::vector<std::string> list;
            do {
                cur.skip_space();
                const std::size_t at = cur.pos;
                std::string n(cur.token());
                if (std::find(list.begin(), list.end(), n) != list.end()) cur.fail_at("duplicate candidate '" + n + "'", at);
                list.push_back(std::move(n));
            } while (cur.accept(','));
            detail::expect_end(cur);
            if (static_cast<int>(list.size()) > max_candidates) cur.fail("too many candidates");
            names = std::move(list);
            continue;
        }
        if (detail::keyword(cur, "manipulators")) {
            if (manipulators) cur.fail("duplicate manipulators line");
            std::vector<Weight> ws;
            cur.skip_space();
            if (!cur.done()) {
                do ws.push_back(detail::parse_weight(cur));
                while (cur.accept(','));
            }
            detail::expect_end(cur);
            manipulators = std::move(ws);
            continue;
        }
        const auto section = [&](Mode m) {
            detail::expect_end(cur);
            if (mode != Mode::Unset) cur.fail("section header must precede every vote line");
            mode = m;
        };
        if (detail::keyword(cur, "partial")) {
            section(Mode::Partial);
            continue;
        }
        if (detail::keyword(cur, "probabilistic")) {
            section(Mode::Probabilistic);
            continue;
        }

        if (!names) cur.fail("vote line before the candidates line");
        const bool has_prob = cur.text.find('?') != std::string_view::npos;
        if (mode == Mode::Unset) mode = has_prob ? Mode::Probabilistic : Mode::Complete;
        if (has_prob != (mode == Mode::Probabilistic)) {
            cur.fail(has_prob ? "probability outside a probabilistic profile" : "missing probability");
        }
        const Weight w = detail::parse_weight(cur);
        cur.expect(':');
        if (mode == Mode::Probabilistic) {
            VoterDistribution d{w, {}};
            do {
                TopOrder b = detail::parse_ballot(cur, *names);
                cur.expect('?');
                d.support.push_back({std::move(b), detail::parse_probability(cur)});
            } while (cur.accept('|'));
            detail::expect_end(cur);
            Rational total = 0;
            for (const auto& s : d.support) {
                if (s.prob <= 0) cur.fail("probabilities must be positive");
                total += s.prob;
            }
            if (total != 1) cur.fail("probabilities sum to " + total.to_string());
            prob.push_back(std::move(d));
        } else {
            TopOrder b = detail::parse_ballot(cur, *names);
            detail::expect_end(cur);
            if (mode == Mode::Partial) partial.push_back({std::move(b), w});
            else votes.push_back({std::move(b), w});
        }
    }
    if (!names) throw ParseError("missing candidates line", line_no, 1);

    const int m = static_cast<int>(names->size());
    ProfileDocument doc{*names, Profile(m, {}, *names), manipulators};
    switch (mode) {
    case Mode::Partial:
        doc.body = PartialProfile{m, std::move(partial), *names};
        break;
    case Mode::Probabilistic:
        doc.body = ProbabilisticInstance{m, std::move(prob), *names};
        break;
    default:
        doc.body = Profile(m, std::move(votes), *names);
        break;
    }
    return doc;
}

inline std::string format_ballot(const TopOrder& b, const std::vector<std::string>& names) {
    std::string out;
    for (int i = 0; i < b.size(); ++i) {
        if (i) out += " > ";
        out += names.at(static_cast<std::size_t>(b[i].index));
    }
    return out;
}

inline std::string serialize(const ProfileDocument& doc) {
    for (const auto& n : doc.names) {
        if (!detail::valid_name(n)) throw ConstraintViolation("candidate name '" + n + "' cannot be written");
    }
    std::ostringstream os;
    os << "candidates: ";
    for (std::size_t i = 0; i < doc.names.size(); ++i) os << (i ? ", " : "") << doc.names[i];
    os << '\n';
    if (doc.manipulators) {
        os << "manipulators:";
        for (std::size_t i = 0; i < doc.manipulators->size(); ++i) os << (i ? ", " : " ") << (*doc.manipulators)[i];
        os << '\n';
    }
    if (const auto* p = std::get_if<Profile>(&doc.body)) {
        for (const auto& v : p->votes()) os << v.weight << ": " << format_ballot(v.ballot, doc.names) << '\n';
    } else if (const auto* p = std::get_if<PartialProfile>(&doc.body)) {
        os << "partial:\n";
        for (const auto& v : p->revealed) os << v.weight << ": " << format_ballot(v.prefix, doc.names) << '\n';
    } else {
        os << "probabilistic:\n";
        for (const auto& v : std::get<ProbabilisticInstance>(doc.body).voters) {
            os << v.weight << ": ";
            for (std::size_t i = 0; i < v.support.size(); ++i) {
                os << (i ? " | " : "") << format_ballot(v.support[i].ballot, doc.names) << " ? " << v.support[i].prob;
            }
            os << '\n';
        }
    }
    return os.str();
}

inline ProfileDocument document_of(const ManipulationInstance& inst) {
    std::vector<std::string> names = inst.names;
    if (names.empty()) names = Profile(inst.m).names();
    return {names, Profile(inst.m, inst.fixed, names), inst.manipulator_weights};
}

namespace detail {

inline ScoringVector parse_vector(std::string_view text, int m) {
    if (text == "plurality") return ScoringVector::plurality(m);
    if (text == "veto") return ScoringVector::veto(m);
    if (text == "borda") return ScoringVector::borda(m);
    std::vector<Rational> alphas;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view part = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
        try {
            alphas.push_back(Rational::parse(part));
        } catch (const std::exception&) {
            throw ParseError("malformed scoring vector entry '" + std::string(part) + "'", 1,
                             static_cast<int>(start) + 1);
        }
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (static_cast<int>(alphas.size()) != m) {
        throw DimensionMismatch("scoring vector has " + std::to_string(alphas.size()) + " entries for " +
                                std::to_string(m) + " candidates");
    }
    return ScoringVector(std::move(alphas));
}

} // namespace detail

/// Rule grammar: scoring:<name|v1,..>:<up|down|avg>, eliminate:<name|v1,..>, runoff, copeland:<n>/<d>, maximin.
inline RuleSpec parse_rule(std::string_view text, int m) {
    const auto colon = text.find(':');
    const std::string_view head = text.substr(0, colon);
    const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (head == "runoff" || head == "maximin") {
        if (colon != std::string_view::npos) throw ParseError("'" + std::string(head) + "' takes no parameters", 1, static_cast<int>(colon) + 1);
        if (head == "runoff") return RunoffRule{};
        return MaximinRule{};
    }
    if (colon == std::string_view::npos) throw ParseError("unknown rule '" + std::string(text) + "'", 1, 1);
    if (head == "scoring") {
        const auto second = rest.rfind(':');
        if (second == std::string_view::npos) throw ParseError("expected scoring:<vector>:<up|down|avg>", 1, static_cast<int>(text.size()));
        const std::string_view scheme = rest.substr(second + 1);
        TruncationScheme s;
        if (scheme == "up") s = TruncationScheme::RoundUp;
        else if (scheme == "down") s = TruncationScheme::RoundDown;
        else if (scheme == "avg") s = TruncationScheme::Average;
        else throw ParseError("unknown truncation scheme '" + std::string(scheme) + "'", 1, static_cast<int>(colon + second) + 3);
        return ScoringRule{detail::parse_vector(rest.substr(0, second), m), s};
    }
    if (head == "eliminate") return EliminationRule{detail::parse_vector(rest, m)};
    if (head == "copeland") {
        Rational a;
        try {
            a = Rational::parse(rest);
        } catch (const std::exception&) {
            throw ParseError("malformed Copeland parameter '" + std::string(rest) + "'", 1, static_cast<int>(colon) + 2);
        }
        return CopelandRule{a};
    }
    throw ParseError("unknown rule '" + std::string(head) + "'", 1, 1);
}

/// One non-negative integer per line; '#' starts a comment.
inline NumberInstance parse_numbers(std::string_view text, NumberKind kind) {
    NumberInstance out{{}, kind};
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line_no;
        detail::Cursor cur{detail::strip_comment(text.substr(start, end - start)), line_no};
        start = end + 1;
        if (detail::blank(cur.text)) continue;
        out.values.push_back(detail::parse_weight(cur));
        detail::expect_end(cur);
    }
    return out;
}

inline std::string serialize(const NumberInstance& n) {
    std::string out;
    for (Weight v : n.values) out += std::to_string(v) + "\n";
    return out;
}

} // namespace truncvote

#endif // TRUNCVOTE_TEXT_FORMAT_HPP
