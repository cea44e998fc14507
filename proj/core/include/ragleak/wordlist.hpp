#pragma once

#include <string>
#include <vector>

namespace ragleak {

/// Common-English word list backing the builtin random-text sampler.
/// Shipped as data/wordlist.txt as well; both carry the same content.
const std::vector<std::string>& builtin_wordlist();

std::vector<std::string> load_wordlist_file(const std::string& path);

}  // namespace ragleak
