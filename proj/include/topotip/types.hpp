#ifndef TOPOTIP_TYPES_HPP_
#define TOPOTIP_TYPES_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace topotip
{

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A scalar indicator together with a flag raised when its defining
/// formula had no valid input (empty barcode, empty hypergraph, ...).
struct Measured
{
  double value = 0.0;
  bool degenerate = false;
};

/// Base of every error thrown by the library. The category maps onto the
/// CLI exit codes.
class Error : public std::runtime_error
{
public:
  enum class Category { config, input, numerical };

  Error(Category category, const std::string & what)
  : std::runtime_error(what), category_(category) {}

  Category category() const noexcept {return category_;}

private:
  Category category_;
};

class ConfigError : public Error
{
public:
  explicit ConfigError(const std::string & what)
  : Error(Category::config, what) {}
};

class InputError : public Error
{
public:
  explicit InputError(const std::string & what)
  : Error(Category::input, what) {}
};

/// Malformed row in an input file; carries the 1-based line number.
class ParseError : public InputError
{
public:
  ParseError(std::size_t line, const std::string & what)
  : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept {return line_;}

private:
  std::size_t line_;
};

class SchemaError : public InputError
{
public:
  using InputError::InputError;
};

class NumericalError : public Error
{
public:
  explicit NumericalError(const std::string & what)
  : Error(Category::numerical, what) {}
};

}  // namespace topotip

#endif  // TOPOTIP_TYPES_HPP_
