#include "ragleak/extraction.hpp"

#include <fstream>
#include <sstream>

#include <boost/regex.hpp>
#include <nlohmann/json.hpp>

#include "ragleak/errors.hpp"
#include "ragleak/text.hpp"

namespace ragleak {

namespace {

boost::regex compile_pattern(const std::string& pattern) {
    try {
        return boost::regex(pattern, boost::regex::perl);
    } catch (const boost::regex_error& e) {
        throw ArgumentError("extraction pattern does not compile: " + pattern + " (" + e.what() + ")");
    }
}

// The pattern library's anchors follow the common scripting-language
// semantics: with (?s), '$' means end of input. Boost defaults to
// line anchors, so searches pass match_single_line.
constexpr auto kMatchFlags = boost::regex_constants::match_single_line;

std::string regex_escape(const std::string& literal) {
    static const std::string special = R"(\^$.|?*+()[]{})";
    std::string out;
    out.reserve(literal.size());
    for (char c : literal) {
        if (special.find(c) != std::string::npos) out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

}  // namespace

void ExtractionPattern::validate() const {
    if (framework.empty()) throw ArgumentError("extraction pattern: framework name is empty");
    const auto re = compile_pattern(pattern);
    if (re.mark_count() != 1) {
        throw ArgumentError("extraction pattern for " + framework +
                            " must have exactly one capture group, has " +
                            std::to_string(re.mark_count()));
    }
}

const std::vector<ExtractionPattern>& builtin_patterns() {
    static const std::vector<ExtractionPattern> patterns = [] {
        std::vector<ExtractionPattern> p;
        p.push_back(ExtractionPattern{
            "coze",
            R"((?si)(?:The\s+following\s+is\s+the\s+content\s+of\s+the\s+data\s+set\s+you\s+can\s+refer\s+to\s*:)\s*(.*?)(?=\s*(?:question\s+is|query\s+is|question:|query:)\s*))"});
        p.push_back(ExtractionPattern{
            "langchain_v4",
            R"((?si)<\s*(?:context|content|reference)\s*>\s*(.*?)\s*<\s*/\s*(?:context|content|reference)\s*>)"});
        p.push_back(ExtractionPattern{
            "langchain_v1",
            R"((?si)(?:Context|Content|Reference)\s*:\s*(.*?)(?=\s*(?:Question|Answer|Result|Reply|Response|Solution)\s*:|$))"});
        p.push_back(ExtractionPattern{
            "langchain_v2",
            R"(You are an assistant for question-answering tasks.*?\n\s*\n([^\n]*(?:\n(?!\s*\n)[^\n]*)*))"});
        p.push_back(ExtractionPattern{
            "langchain_v3",
            R"((?si)^.*?\n\s*\n(.*?)(?=\n\s*\n(?:Question|Problem|Query|Task|Prompt|Instruction|Assignment|Challenge|Inquiry):\s*))"});
        for (const auto& pat : p) pat.validate();
        return p;
    }();
    return patterns;
}

std::vector<ExtractionPattern> load_patterns_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("patterns: invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ConfigError("patterns: expected a JSON array");
    std::vector<ExtractionPattern> out;
    for (const auto& item : doc) {
        ExtractionPattern p;
        p.framework = item.at("framework").get<std::string>();
        p.pattern = item.at("pattern").get<std::string>();
        p.validate();
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<ExtractionPattern> load_patterns_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open pattern file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_patterns_json(buf.str());
}

std::string patterns_to_json(const std::vector<ExtractionPattern>& patterns) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& p : patterns) {
        doc.push_back({{"framework", p.framework}, {"pattern", p.pattern}});
    }
    return doc.dump(2) + "\n";
}

std::string normalize(const std::string& text) {
    std::string joined;
    joined.reserve(text.size());
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line(text.data() + pos,
                              (nl == std::string::npos ? text.size() : nl) - pos);
        line = trim(line);
        // Strip the evasion markers at the line edges; interior "&&" stays.
        if (line.size() >= 2 && line.substr(0, 2) == "&&") line = trim(line.substr(2));
        if (line.size() >= 2 && line.substr(line.size() - 2) == "&&") {
            line = trim(line.substr(0, line.size() - 2));
        }
        if (!line.empty()) {
            if (!joined.empty()) joined.push_back(' ');
            joined.append(line);
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    return collapse_whitespace(joined);
}

std::vector<std::string> segment_context(const std::string& capture, const PromptTemplate& tmpl) {
    std::vector<std::string> pieces;
    if (tmpl.slice_header_pattern) {
        std::string header_re = regex_escape(*tmpl.slice_header_pattern);
        const auto pos = header_re.find(regex_escape("{i}"));
        header_re.replace(pos, regex_escape("{i}").size(), R"(\d+)");
        const boost::regex re(header_re, boost::regex::perl);

        std::vector<std::pair<std::size_t, std::size_t>> headers;
        auto begin = capture.cbegin();
        boost::smatch m;
        while (boost::regex_search(begin, capture.cend(), m, re, kMatchFlags)) {
            const auto off = static_cast<std::size_t>(m[0].first - capture.cbegin());
            const auto len = static_cast<std::size_t>(m[0].second - m[0].first);
            headers.emplace_back(off, len);
            begin = m[0].second;
        }
        if (headers.empty()) {
            pieces.emplace_back(capture);
        } else {
            if (headers.front().first > 0) {
                pieces.push_back(capture.substr(0, headers.front().first));
            }
            for (std::size_t i = 0; i < headers.size(); ++i) {
                const std::size_t from = headers[i].first + headers[i].second;
                const std::size_t to =
                    (i + 1 < headers.size()) ? headers[i + 1].first : capture.size();
                pieces.push_back(capture.substr(from, to - from));
            }
        }
    } else if (!tmpl.context_joiner.empty()) {
        std::size_t pos = 0;
        while (pos <= capture.size()) {
            const auto next = capture.find(tmpl.context_joiner, pos);
            if (next == std::string::npos) {
                pieces.push_back(capture.substr(pos));
                break;
            }
            pieces.push_back(capture.substr(pos, next - pos));
            pos = next + tmpl.context_joiner.size();
        }
    } else {
        pieces.emplace_back(capture);
    }

    std::vector<std::string> out;
    out.reserve(pieces.size());
    for (auto& piece : pieces) {
        auto t = trim(piece);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

ExtractionOutcome extract_chunks(const std::string& response_text,
                                 const std::vector<ExtractionPattern>& patterns,
                                 const std::vector<PromptTemplate>& templates,
                                 std::size_t min_candidate_words) {
    if (patterns.empty()) throw ArgumentError("extract_chunks: pattern list is empty");

    ExtractionOutcome outcome;
    for (const auto& pattern : patterns) {
        const auto re = compile_pattern(pattern.pattern);
        boost::smatch m;
        if (!boost::regex_search(response_text, m, re, kMatchFlags)) continue;
        if (!m[1].matched || trim(m[1].str()).empty()) continue;

        outcome.matched_framework = pattern.framework;
        outcome.raw_capture = m[1].str();

        // Segment with the matching framework's template; a user-supplied
        // pattern without a template yields the whole capture as one piece.
        const PromptTemplate* tmpl = nullptr;
        for (const auto& t : templates) {
            if (t.framework == pattern.framework) {
                tmpl = &t;
                break;
            }
        }
        std::vector<std::string> pieces;
        if (tmpl) {
            pieces = segment_context(outcome.raw_capture, *tmpl);
        } else {
            pieces.push_back(outcome.raw_capture);
        }
        for (const auto& piece : pieces) {
            auto candidate = normalize(piece);
            if (candidate.empty()) continue;
            if (min_candidate_words > 0 && word_count(candidate) < min_candidate_words) continue;
            outcome.candidates.push_back(std::move(candidate));
        }
        break;
    }
    return outcome;
}

}  // namespace ragleak
