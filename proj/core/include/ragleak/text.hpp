#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ragleak {

/// Splits on whitespace; a word is a maximal run of non-whitespace bytes.
std::vector<std::string_view> split_words(std::string_view text);

/// Number of whitespace-delimited words.
std::size_t word_count(std::string_view text);

/// Joins words with single spaces.
std::string join_words(std::span<const std::string_view> words);
std::string join_words(const std::vector<std::string_view>& words, std::size_t begin, std::size_t end);

std::string to_lower(std::string_view text);

/// Collapses whitespace runs to single spaces and trims the ends.
std::string collapse_whitespace(std::string_view text);

std::string_view trim(std::string_view text);

/// True if the word ends a sentence (terminal . ! ? possibly followed by
/// closing quotes/brackets).
bool ends_sentence(std::string_view word);

/// Splits text into sentences; a sentence ends after a word for which
/// ends_sentence() holds. The trailing fragment, if any, is its own entry.
std::vector<std::string> split_sentences(std::string_view text);

/// True if the bytes form valid UTF-8.
bool is_valid_utf8(std::string_view bytes);

}  // namespace ragleak
