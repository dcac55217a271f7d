#pragma once

#include <string>

namespace fkdv {

/// Shortest decimal text that round-trips to the same double.
std::string shortest(double v);

/// printf "%.12e"; the fixed number format of reports.
std::string sci12(double v);

}  // namespace fkdv
