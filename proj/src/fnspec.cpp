#include "smoothcert/fnspec.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "numfmt.hpp"
#include "smoothcert/errors.hpp"

namespace smoothcert {

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  FunctionHandle parse_all(std::size_t dim) {
    skip_ws();
    if (pos_ == text_.size()) throw ParseError(0, "empty function spec");
    FunctionHandle f = parse_spec(dim);
    skip_ws();
    if (pos_ != text_.size()) {
      throw ParseError(pos_, "unexpected trailing input '" +
                                 std::string(text_.substr(pos_)) + "'");
    }
    return f;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!consume(c)) {
      const std::string found =
          pos_ < text_.size() ? "'" + std::string(1, text_[pos_]) + "'" : "end of input";
      throw ParseError(pos_, std::string("expected '") + c + "', found " + found);
    }
  }

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) {
      throw ParseError(start, "expected a function name");
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  double real() {
    skip_ws();
    const std::size_t start = pos_;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    if (first != last && *first == '+') ++first;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || !std::isfinite(value)) {
      throw ParseError(start, "expected a finite real number");
    }
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  std::vector<double> optional_args() {
    std::vector<double> args;
    if (!consume('(')) return args;
    do {
      args.push_back(real());
    } while (consume(','));
    expect(')');
    return args;
  }

  FunctionHandle parse_spec(std::size_t dim) {
    skip_ws();
    const std::size_t start = pos_;
    const std::string name = identifier();

    if (name == "scale") {
      expect('(');
      skip_ws();
      const std::size_t arg_pos = pos_;
      const double a = real();
      expect(',');
      FunctionHandle f = parse_spec(dim);
      expect(')');
      if (a < 0.0) {
        throw ParseError(arg_pos, "negative scale " + detail::format_real(a) +
                                      ": a*f is only convex for a >= 0");
      }
      return scale(a, f);
    }
    if (name == "sum") {
      expect('(');
      FunctionHandle f = parse_spec(dim);
      expect(',');
      FunctionHandle g = parse_spec(dim);
      expect(')');
      return fn_sum(f, g);
    }
    if (name == "compose") {
      expect('(');
      FunctionHandle h = parse_spec(1);
      expect(',');
      FunctionHandle f = parse_spec(dim);
      expect(')');
      return compose_mono(h, f);
    }

    const std::vector<double> args = optional_args();
    try {
      return builtin(name, args, dim, start);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(start, name + ": " + e.what());
    }
  }

  FunctionHandle builtin(const std::string& name, const std::vector<double>& args,
                         std::size_t dim, std::size_t at) {
    auto arity = [&](std::size_t expected, const std::string& form) {
      if (args.size() != expected) {
        throw ParseError(at, name + " takes " + form + ", got " +
                                 std::to_string(args.size()) + " argument(s)");
      }
    };
    auto one_dim = [&] {
      if (dim != 1) {
        throw ParseError(at, name + " is one-dimensional but the requested "
                                    "dimension is " + std::to_string(dim));
      }
    };

    if (name == "square") {
      one_dim();
      arity(0, "no arguments");
      return catalog::square();
    }
    if (name == "sqpos") {
      one_dim();
      arity(0, "no arguments");
      return catalog::square_nonneg();
    }
    if (name == "quartic") {
      one_dim();
      arity(0, "no arguments");
      return catalog::quartic1d();
    }
    if (name == "norm" || name == "eu_norm") {
      arity(0, "no arguments");
      return catalog::eu_norm_fn(dim);
    }
    if (name == "norm2" || name == "norm_sq") {
      arity(0, "no arguments");
      return catalog::norm_sq_fn(dim);
    }
    if (name == "neg_norm2" || name == "neg_norm_sq") {
      arity(0, "no arguments");
      return catalog::neg_norm_sq(dim);
    }
    if (name == "const") {
      if (args.size() > 1) arity(1, "at most one argument");
      return catalog::const_fn(dim, args.empty() ? catalog::kConstWitness : args[0]);
    }
    if (name == "affine") {
      if (args.empty()) return catalog::affine(Vector::filled(dim, 1.0), 0.0);
      arity(dim + 1, std::to_string(dim + 1) + " arguments (g1..g" +
                         std::to_string(dim) + ", b)");
      return catalog::affine(Vector(std::vector<double>(args.begin(), args.end() - 1)),
                             args.back());
    }
    if (name == "diagq") {
      arity(dim, std::to_string(dim) + " coefficient(s), one per dimension");
      return catalog::diag_quadratic(args);
    }
    throw ParseError(at, "unknown function '" + name + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

FunctionHandle parse_fn_spec(std::string_view text, std::size_t dim) {
  if (dim == 0) throw ParseError(0, "dimension must be >= 1");
  return SpecParser(text).parse_all(dim);
}

}  // namespace smoothcert
