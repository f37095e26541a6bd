#pragma once

#include <iosfwd>
#include <string>

#include "simperm/cube.hpp"

namespace simperm {

// Text interchange format, one generator per line:
//
//   target; j1,j2,...; table-hex [# label]
//
// Controls may be empty (width 0). Blank lines and lines starting with '#'
// are ignored. Consecutive generators carrying the same label become one span.
std::string format_word(const Word& w);
void write_word(std::ostream& os, const Word& w);
Word parse_word(const std::string& text);
Word read_word(std::istream& is);

std::string format_perm(const SimplePerm& p);

}  // namespace simperm
