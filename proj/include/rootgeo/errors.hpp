#ifndef ROOTGEO_ERRORS_HPP
#define ROOTGEO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rootgeo {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisionByZero : Error {
  DivisionByZero() : Error("division by zero") {}
};

struct FieldMismatch : Error {
  FieldMismatch() : Error("operands belong to different fields") {}
};

struct IndexOutOfRange : Error {
  explicit IndexOutOfRange(const std::string& what) : Error(what) {}
};

struct IndexError : Error {
  explicit IndexError(const std::string& what) : Error(what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

struct NoDerivations : Error {
  NoDerivations() : Error("field has an empty derivation basis") {}
};

struct UnsupportedField : Error {
  explicit UnsupportedField(const std::string& what) : Error(what) {}
};

struct DegenerateLine : Error {
  explicit DegenerateLine(const std::string& what) : Error(what) {}
};

struct NotAComplement : Error {
  explicit NotAComplement(const std::string& what) : Error(what) {}
};

struct RequiresN3 : Error {
  RequiresN3() : Error("construction needs at least 3 diagonal slots (n >= 2)") {}
};

struct RelationNotKilled : Error {
  RelationNotKilled() : Error("internal: a gluing relation does not map to zero") {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& what) : Error(what) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace rootgeo

#endif
