#ifndef VA_ERROR_HPP
#define VA_ERROR_HPP

#include <stdexcept>
#include <string>

namespace va {

// Base for all library errors; the what() string is user-facing.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class UndefinedProduct : public Error {
public:
    explicit UndefinedProduct(const std::string& msg)
        : Error("UndefinedProduct: " + msg) {}
};

class BothArgumentsNumeric : public Error {
public:
    BothArgumentsNumeric()
        : Error("BothArgumentsNumeric: binomial expansion needs at least one formal variable") {}
};

class DuplicateVariable : public Error {
public:
    explicit DuplicateVariable(const std::string& var)
        : Error("DuplicateVariable: " + var) {}
};

class VariableCollision : public Error {
public:
    explicit VariableCollision(const std::string& var)
        : Error("VariableCollision: " + var + " already occurs in the series") {}
};

class MissingTableEntry : public Error {
public:
    explicit MissingTableEntry(const std::string& what)
        : Error("MissingTableEntry: " + what) {}
};

class NotLocallyNilpotent : public Error {
public:
    explicit NotLocallyNilpotent(const std::string& what)
        : Error("NotLocallyNilpotent: " + what) {}
};

class NotStronglyGraded : public Error {
public:
    explicit NotStronglyGraded(const std::string& what)
        : Error("NotStronglyGraded: " + what) {}
};

class NotAHomomorphism : public Error {
public:
    explicit NotAHomomorphism(const std::string& what)
        : Error("NotAHomomorphism: " + what) {}
};

class NotFiniteDimensional : public Error {
public:
    explicit NotFiniteDimensional(const std::string& what)
        : Error("NotFiniteDimensional: " + what) {}
};

class AlgebraMismatch : public Error {
public:
    explicit AlgebraMismatch(const std::string& what)
        : Error("AlgebraMismatch: " + what) {}
};

class SpecInvalid : public Error {
public:
    explicit SpecInvalid(const std::string& what)
        : Error("SpecInvalid: " + what) {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what)
        : Error("SchemaError: " + what) {}
};

class InvariantViolation : public Error {
public:
    InvariantViolation(const std::string& name, const std::string& witness)
        : Error("InvariantViolation: " + name + " — " + witness),
          invariant(name), witness(witness) {}
    std::string invariant;
    std::string witness;
};

class NoFit : public Error {
public:
    explicit NoFit(const std::string& what) : Error("NoFit: " + what) {}
};

class AmbiguousFit : public Error {
public:
    explicit AmbiguousFit(const std::string& what) : Error("AmbiguousFit: " + what) {}
};

class PoleHit : public Error {
public:
    explicit PoleHit(const std::string& what) : Error("PoleHit: " + what) {}
};

class SyntaxError : public Error {
public:
    SyntaxError(int line, int column, const std::string& expected)
        : Error("SyntaxError at " + std::to_string(line) + ":" + std::to_string(column) +
                ", expected " + expected),
          line(line), column(column), expected(expected) {}
    int line;
    int column;
    std::string expected;
};

class EvalError : public Error {
public:
    explicit EvalError(const std::string& what) : Error("EvalError: " + what) {}
};

} // namespace va

#endif
