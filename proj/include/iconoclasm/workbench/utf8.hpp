#pragma once

#include <span>
#include <string>
#include <string_view>

namespace iconoclasm::workbench {

// Strict UTF-8 decode; rejects overlong forms, surrogates and truncation with FormatError.
std::u32string decode_utf8(std::string_view bytes);
std::string encode_utf8(std::u32string_view text);

}  // namespace iconoclasm::workbench
