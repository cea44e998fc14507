#include "ragleak/text.hpp"

#include <algorithm>
#include <cctype>
#include <span>

namespace ragleak {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::vector<std::string_view> split_words(std::string_view text) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < n && !is_space(text[i])) ++i;
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    return words;
}

std::size_t word_count(std::string_view text) {
    std::size_t count = 0;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && is_space(text[i])) ++i;
        if (i < n) ++count;
        while (i < n && !is_space(text[i])) ++i;
    }
    return count;
}

std::string join_words(std::span<const std::string_view> words) {
    std::string out;
    std::size_t total = 0;
    for (auto w : words) total += w.size() + 1;
    out.reserve(total);
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out.append(words[i]);
    }
    return out;
}

std::string join_words(const std::vector<std::string_view>& words, std::size_t begin, std::size_t end) {
    return join_words(std::span<const std::string_view>(words.data() + begin, end - begin));
}

std::string to_lower(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;  // swallow leading whitespace
    for (char c : text) {
        if (is_space(c)) {
            in_space = true;
        } else {
            if (in_space && !out.empty()) out.push_back(' ');
            out.push_back(c);
            in_space = false;
        }
    }
    return out;
}

std::string_view trim(std::string_view text) {
    std::size_t b = 0;
    std::size_t e = text.size();
    while (b < e && is_space(text[b])) ++b;
    while (e > b && is_space(text[e - 1])) --e;
    return text.substr(b, e - b);
}

bool ends_sentence(std::string_view word) {
    // Ignore trailing quotes/brackets around the terminal mark.
    std::size_t i = word.size();
    while (i > 0) {
        char c = word[i - 1];
        if (c == '"' || c == '\'' || c == ')' || c == ']') {
            --i;
            continue;
        }
        return c == '.' || c == '!' || c == '?';
    }
    return false;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> sentences;
    auto words = split_words(text);
    std::size_t start = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (ends_sentence(words[i])) {
            sentences.push_back(join_words(words, start, i + 1));
            start = i + 1;
        }
    }
    if (start < words.size()) sentences.push_back(join_words(words, start, words.size()));
    return sentences;
}

bool is_valid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        if (c < 0x80) {
            len = 1;
        } else if ((c & 0xe0) == 0xc0) {
            len = 2;
            if (c < 0xc2) return false;  // overlong
        } else if ((c & 0xf0) == 0xe0) {
            len = 3;
        } else if ((c & 0xf8) == 0xf0) {
            len = 4;
            if (c > 0xf4) return false;  // beyond U+10FFFF
        } else {
            return false;
        }
        if (i + len > n) return false;
        for (std::size_t j = 1; j < len; ++j) {
            if ((static_cast<unsigned char>(bytes[i + j]) & 0xc0) != 0x80) return false;
        }
        i += len;
    }
    return true;
}

}  // namespace ragleak
