#pragma once

#include <string>

namespace fixpoint {

/// Shortest decimal form that round-trips to the same double. Used wherever
/// text output has to be byte-stable across runs and platforms.
std::string format_double(double v);

}  // namespace fixpoint
