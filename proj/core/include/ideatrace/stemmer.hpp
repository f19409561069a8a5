#pragma once

#include <string>
#include <string_view>

namespace ideatrace {

// Snowball English (Porter2) stemmer.
//
// Expects a lowercase word; apostrophes are handled per the algorithm,
// anything else non-alphabetic should have been stripped by the tokenizer.
// Words of one or two letters are returned unchanged.
std::string stem_english(std::string_view word);

}  // namespace ideatrace
