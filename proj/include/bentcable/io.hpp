#ifndef BENTCABLE_IO_HPP
#define BENTCABLE_IO_HPP

#include <iosfwd>
#include <string>

#include "bentcable/estimation.hpp"

namespace bentcable {

/// Two-column CSV with header `x,y`. Blank lines and lines starting with `#` are skipped.
/// Throws Input with the offending line number.
Dataset read_csv(std::istream& in);
Dataset read_csv(const std::string& path);

/// Writes `x,y` in shortest round-trip form, so read_csv(write_csv(d)) == d.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::string& path, const Dataset& data);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace bentcable

#endif  // BENTCABLE_IO_HPP
