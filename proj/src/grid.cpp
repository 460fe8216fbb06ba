#include "afdm/grid.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "afdm/types.hpp"

namespace afdm {

namespace {

class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, double n) : text_(text), n_(n) {}

  double parse() {
    const double v = sum();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return v;
  }

 private:
  double sum() {
    double v = product();
    for (;;) {
      skip_space();
      if (accept('+')) v += product();
      else if (accept('-')) v -= product();
      else return v;
    }
  }

  double product() {
    double v = unary();
    for (;;) {
      skip_space();
      if (accept('*')) v *= unary();
      else if (accept('/')) v /= unary();
      else if (starts_primary()) v *= unary();
      else return v;
    }
  }

  double unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return primary();
  }

  double primary() {
    skip_space();
    if (accept('(')) {
      const double v = sum();
      skip_space();
      if (!accept(')')) fail("missing ')'");
      return v;
    }
    if (accept('N')) return n_;
    if (text_.substr(pos_, 3) == "inf") {
      pos_ += 3;
      return std::numeric_limits<double>::infinity();
    }
    double v = 0.0;
    const char* begin = text_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(), v);
    if (ec != std::errc() || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  bool starts_primary() const {
    if (pos_ >= text_.size()) return false;
    const char ch = text_[pos_];
    return ch == '(' || ch == 'N' || std::isdigit(static_cast<unsigned char>(ch)) || ch == '.';
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("bad expression '" + std::string(text_) + "': " + what);
  }

  std::string_view text_;
  double n_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t at = text.find(sep, start);
    out.push_back(text.substr(start, at == std::string_view::npos ? at : at - start));
    if (at == std::string_view::npos) return out;
    start = at + 1;
  }
}

}  // namespace

double evaluate_expression(std::string_view text, std::size_t n) {
  return ExpressionParser(text, static_cast<double>(n)).parse();
}

std::vector<double> expand_range(const Range& r) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !std::isfinite(r.step))
    throw InvalidArgument("grid bounds must be finite");
  if (r.lo > r.hi) throw InvalidArgument("grid lower bound exceeds upper bound");
  if (!(r.step > 0.0)) throw InvalidArgument("grid step must be positive");
  const auto count = static_cast<std::size_t>(std::floor((r.hi - r.lo) / r.step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = r.lo + static_cast<double>(i) * r.step;
  return out;
}

std::vector<double> parse_grid(std::string_view text, std::size_t n) {
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InvalidArgument("range must be lo:step:hi");
    return expand_range({evaluate_expression(parts[0], n), evaluate_expression(parts[1], n),
                         evaluate_expression(parts[2], n)});
  }
  std::vector<double> out;
  for (auto item : split(text, ',')) out.push_back(evaluate_expression(item, n));
  if (out.empty()) throw InvalidArgument("empty grid");
  return out;
}

}  // namespace afdm
