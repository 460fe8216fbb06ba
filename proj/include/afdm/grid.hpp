#pragma once

// Parsing of numeric grids such as `0:1/(4N):1` or `0.1,0.2,0.4`.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace afdm {

// Arithmetic expression with + - * / ( ), decimal literals, `inf`, and the
// symbol N bound to `n`. Juxtaposition multiplies, so `4N` is 4 * N.
double evaluate_expression(std::string_view text, std::size_t n);

struct Range {
  double lo = 0.0;
  double step = 1.0;
  double hi = 0.0;
};

// Inclusive: lo + i * step for i = 0 .. floor((hi - lo) / step + 1e-9).
// Throws InvalidArgument when lo > hi or step <= 0.
std::vector<double> expand_range(const Range& r);

// `lo:step:hi`, a comma list, or a single value.
std::vector<double> parse_grid(std::string_view text, std::size_t n);

}  // namespace afdm
