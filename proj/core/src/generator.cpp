#include "ragleak/generator.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ragleak/errors.hpp"
#include "ragleak/text.hpp"

namespace ragleak {

namespace {

void check_probability(double p, const char* name) {
    if (p < 0.0 || p > 1.0) {
        throw ArgumentError(std::string("generator: ") + name + " must lie in [0, 1]");
    }
}

}  // namespace

void GeneratorBehavior::validate() const {
    check_probability(leak_probability, "leak_probability");
    check_probability(noise_char_rate, "noise_char_rate");
    check_probability(refusal_probability, "refusal_probability");
}

SimulatedGenerator::SimulatedGenerator(GeneratorBehavior behavior,
                                       std::vector<std::string> trigger_phrases)
    : behavior_(behavior), rng_(behavior.rng_seed) {
    behavior_.validate();
    triggers_lower_.reserve(trigger_phrases.size());
    for (const auto& t : trigger_phrases) triggers_lower_.push_back(to_lower(t));
}

std::string SimulatedGenerator::apply_sentence_markers(const std::string& text) {
    // Sentence-per-line with "&&" markers; blank lines (paragraph
    // boundaries) pass through so chunk joins stay segmentable.
    std::string out;
    out.reserve(text.size() + text.size() / 8);
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const std::string_view line(text.data() + pos,
                                    (nl == std::string::npos ? text.size() : nl) - pos);
        if (trim(line).empty()) {
            out.push_back('\n');
        } else {
            for (const auto& sentence : split_sentences(line)) {
                out += "&& ";
                out += sentence;
                out += " &&\n";
            }
        }
        if (nl == std::string::npos) break;
        pos = nl + 1;
    }
    if (!out.empty() && out.back() == '\n') out.pop_back();
    return out;
}

GenerationResult SimulatedGenerator::generate(const std::string& assembled_prompt,
                                              const std::string& user_query) {
    // Fixed draw order keeps the stream aligned across configurations.
    const double refusal_roll = rng_.uniform01();
    const double leak_roll = rng_.uniform01();

    if (refusal_roll < behavior_.refusal_probability) {
        return GenerationResult{kRefusalMessage, false};
    }

    const std::string query_lower = to_lower(user_query);
    bool triggered = false;
    for (const auto& phrase : triggers_lower_) {
        if (!phrase.empty() && query_lower.find(phrase) != std::string::npos) {
            triggered = true;
            break;
        }
    }
    if (!triggered || leak_roll >= behavior_.leak_probability) {
        return GenerationResult{kGenericAnswer, false};
    }

    std::string text = assembled_prompt;
    if (behavior_.noise_char_rate > 0.0) {
        static const std::string puncts = ".,;!?'";
        for (char& c : text) {
            if (rng_.uniform01() >= behavior_.noise_char_rate) continue;
            const unsigned char u = static_cast<unsigned char>(c);
            if (std::isalpha(u)) {
                c = std::isupper(u) ? static_cast<char>(std::tolower(u))
                                    : static_cast<char>(std::toupper(u));
            } else if (const auto p = puncts.find(c); p != std::string::npos) {
                c = puncts[(p + 1) % puncts.size()];
            }
        }
    }
    if (behavior_.formatting_mode == FormattingMode::sentence_lines_with_markers) {
        text = apply_sentence_markers(text);
    }
    return GenerationResult{std::move(text), true};
}

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> responses)
    : responses_(responses.begin(), responses.end()) {}

ScriptedGenerator ScriptedGenerator::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open transcript file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("transcript is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_array()) throw ConfigError("transcript must be a JSON array of strings");
    std::vector<std::string> responses;
    for (const auto& item : doc) responses.push_back(item.get<std::string>());
    return ScriptedGenerator(std::move(responses));
}

GenerationResult ScriptedGenerator::generate(const std::string&, const std::string&) {
    if (responses_.empty()) {
        throw TransportError("scripted transcript exhausted", 0, 0);
    }
    GenerationResult result{std::move(responses_.front()), false};
    responses_.pop_front();
    return result;
}

RemoteGenerator::RemoteGenerator(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    if (endpoint_.url.empty()) throw ArgumentError("remote generator requires an endpoint url");
}

GenerationResult RemoteGenerator::generate(const std::string& assembled_prompt,
                                           const std::string& user_query) {
    std::string scheme_host = endpoint_.url;
    std::string path = "/";
    const auto scheme_end = endpoint_.url.find("://");
    if (scheme_end == std::string::npos) {
        throw ArgumentError("remote url has no scheme: " + endpoint_.url);
    }
    if (const auto path_start = endpoint_.url.find('/', scheme_end + 3);
        path_start != std::string::npos) {
        scheme_host = endpoint_.url.substr(0, path_start);
        path = endpoint_.url.substr(path_start);
    }

    nlohmann::json body;
    body["messages"] = nlohmann::json::array({
        {{"role", "system"}, {"content", assembled_prompt}},
        {{"role", "user"}, {"content", user_query}},
    });
    const std::string payload = body.dump();

    int last_status = 0;
    std::string last_error = "connection failed";
    for (int attempt = 0; attempt <= endpoint_.max_retries; ++attempt) {
        httplib::Client client(scheme_host);
        client.set_connection_timeout(0, endpoint_.timeout_ms * 1000);
        client.set_read_timeout(endpoint_.timeout_ms / 1000, (endpoint_.timeout_ms % 1000) * 1000);
        httplib::Headers headers;
        if (!endpoint_.auth_token.empty()) {
            headers.emplace("Authorization", "Bearer " + endpoint_.auth_token);
        }
        auto res = client.Post(path, headers, payload, "application/json");
        if (res && res->status >= 200 && res->status < 300) {
            try {
                auto reply = nlohmann::json::parse(res->body);
                return GenerationResult{reply.at("text").get<std::string>(), false};
            } catch (const nlohmann::json::exception& e) {
                throw TransportError("remote generator reply malformed: " + std::string(e.what()),
                                     res->status, attempt);
            }
        }
        if (res) {
            last_status = res->status;
            last_error = "HTTP " + std::to_string(res->status);
            if (res->status >= 400 && res->status < 500) break;
        }
    }
    throw TransportError("remote generator request failed after retries: " + last_error,
                         last_status, endpoint_.max_retries);
}

}  // namespace ragleak
