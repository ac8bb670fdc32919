#ifndef EDS_ERRORS_HPP
#define EDS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eds {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Scalar kernel
struct UnsupportedAtom : Error { using Error::Error; };
struct DivisionByZero : Error { using Error::Error; };

// Coframe / form layer
struct AlgebraMismatch : Error { using Error::Error; };
struct UntabledSymbol : Error { using Error::Error; };
struct ConstructionError : Error { using Error::Error; };

// Linear algebra / Pfaffian layer
struct UnknownPivot : Error { using Error::Error; };
struct DependentGenerators : Error { using Error::Error; };
struct UnknownVerdict : Error { using Error::Error; };

// Monge-Ampere layer
struct IndefiniteSign : Error { using Error::Error; };
struct FactorizationFailure : Error { using Error::Error; };

// Backlund layer
struct NotASection : Error { using Error::Error; };
struct ResidueError : Error { using Error::Error; };
struct InconsistentTable : Error { using Error::Error; };

// Conservation laws
struct NoSolution : Error { using Error::Error; };
struct NormalFormFailure : Error { using Error::Error; };

// DSL
struct SyntaxError : Error {
    int line, col;
    SyntaxError(int line_, int col_, const std::string& what)
        : Error("syntax error at " + std::to_string(line_) + ":" + std::to_string(col_) + ": " + what),
          line(line_), col(col_) {}
};

} // namespace eds

#endif
