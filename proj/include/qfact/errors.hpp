#pragma once

#include <stdexcept>
#include <string>

namespace qfact {

// Exit-code buckets used by the CLI. Library callers just catch the types.
enum class ErrorKind {
    invalid_input = 2,  // bad n, lengths, widths, malformed files
    no_embedding = 3,   // heuristic exhausted its restarts
    not_factored = 4,   // solver budget spent without a valid factorization
    internal = 5,       // broken invariant
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

  private:
    ErrorKind kind_;
};

struct EvenInputError : Error {
    explicit EvenInputError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct LengthTooSmallError : Error {
    explicit LengthTooSmallError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct WidthMismatchError : Error {
    explicit WidthMismatchError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct MissingVariableError : Error {
    explicit MissingVariableError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct DegreeTooHighError : Error {
    explicit DegreeTooHighError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct LengthMismatchError : Error {
    explicit LengthMismatchError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct TooLargeError : Error {
    explicit TooLargeError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct NoEmbeddingFoundError : Error {
    explicit NoEmbeddingFoundError(const std::string& msg) : Error(ErrorKind::no_embedding, msg) {}
};
struct InvalidEmbeddingError : Error {
    explicit InvalidEmbeddingError(const std::string& msg) : Error(ErrorKind::invalid_input, msg) {}
};
struct NonUnitaryDriftError : Error {
    explicit NonUnitaryDriftError(const std::string& msg) : Error(ErrorKind::internal, msg) {}
};
struct InternalError : Error {
    explicit InternalError(const std::string& msg) : Error(ErrorKind::internal, msg) {}
};

}  // namespace qfact
