#pragma once

#include "constrank/matrix.hpp"
#include "detail/text_reader.hpp"

namespace constrank::detail {

/// Parses a field descriptor occupying the rest of a line, reporting errors
/// at the reader's current line.
Field parse_field_at(const TextReader& reader, std::string_view line, const Token& from);

/// One matrix in the text format, starting at the next nonblank line.
Matrix read_matrix_block(TextReader& reader);

}  // namespace constrank::detail
