#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace semspace {

// Error families map one-to-one onto CLI exit codes.
enum class ErrorFamily : int {
    Usage = 2,    // bad arguments, API misuse, guard violations
    Io = 3,       // filesystem and OS-level failures
    Data = 4,     // malformed or inadequate input data
    Numeric = 5,  // numerical failures (non-convergence, degeneracy)
};

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, std::string message)
        : std::runtime_error(std::move(message)), family_(family) {}

    ErrorFamily family() const noexcept { return family_; }
    int exit_code() const noexcept { return static_cast<int>(family_); }

private:
    ErrorFamily family_;
};

class UsageError : public Error {
public:
    explicit UsageError(std::string message) : Error(ErrorFamily::Usage, std::move(message)) {}
};

class IoError : public Error {
public:
    explicit IoError(std::string message) : Error(ErrorFamily::Io, std::move(message)) {}
};

class DataError : public Error {
public:
    explicit DataError(std::string message) : Error(ErrorFamily::Data, std::move(message)) {}
};

class NumericError : public Error {
public:
    explicit NumericError(std::string message) : Error(ErrorFamily::Numeric, std::move(message)) {}
};

// -- corpus ---------------------------------------------------------------

class PathNotFound : public IoError {
public:
    explicit PathNotFound(const std::string& path) : IoError("path not found: " + path) {}
};

class MalformedRecord : public DataError {
public:
    MalformedRecord(std::string file, std::uint64_t line, const std::string& reason)
        : DataError(file + ":" + std::to_string(line) + ": malformed record: " + reason),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::uint64_t line() const noexcept { return line_; }

private:
    std::string file_;
    std::uint64_t line_;
};

// -- dtm ------------------------------------------------------------------

class EmptyCorpus : public DataError {
public:
    EmptyCorpus() : DataError("corpus contains no documents") {}
};

class EmptyVocabulary : public DataError {
public:
    EmptyVocabulary() : DataError("vocabulary is empty") {}
};

class AlreadyWeighted : public UsageError {
public:
    AlreadyWeighted() : UsageError("matrix already carries a weighting") {}
};

class SingleDocumentCorpus : public DataError {
public:
    SingleDocumentCorpus()
        : DataError("log-entropy weighting needs at least two documents (ln(1) = 0)") {}
};

// -- svd ------------------------------------------------------------------

class ZeroMatrix : public NumericError {
public:
    ZeroMatrix() : NumericError("matrix has no nonzero entries") {}
};

class TooLarge : public UsageError {
public:
    explicit TooLarge(const std::string& what) : UsageError("operand too large: " + what) {}
};

class NoConvergence : public NumericError {
public:
    NoConvergence(int iterations, int achieved)
        : NumericError("Lanczos did not converge after " + std::to_string(iterations) +
                       " iterations (" + std::to_string(achieved) + " triplets converged)"),
          iterations_(iterations),
          achieved_(achieved) {}

    int iterations() const noexcept { return iterations_; }
    int achieved() const noexcept { return achieved_; }

private:
    int iterations_;
    int achieved_;
};

// -- space ----------------------------------------------------------------

class DimensionMismatch : public UsageError {
public:
    explicit DimensionMismatch(const std::string& what)
        : UsageError("dimension mismatch: " + what) {}
};

class BadMagic : public DataError {
public:
    BadMagic() : DataError("file is not a semantic-space file (bad magic)") {}
};

class UnsupportedVersion : public DataError {
public:
    explicit UnsupportedVersion(unsigned got)
        : DataError("unsupported space file version " + std::to_string(got)) {}
};

class ChecksumMismatch : public DataError {
public:
    ChecksumMismatch() : DataError("space file failed checksum validation") {}
};

// -- query ----------------------------------------------------------------

class OutOfVocabulary : public DataError {
public:
    explicit OutOfVocabulary(const std::string& term)
        : DataError("term not in vocabulary: '" + term + "'"), term_(term) {}

    const std::string& term() const noexcept { return term_; }

private:
    std::string term_;
};

class ZeroVector : public DataError {
public:
    explicit ZeroVector(const std::string& term)
        : DataError("term has a zero vector, cosine undefined: '" + term + "'") {}
};

class NoKnownWords : public DataError {
public:
    explicit NoKnownWords(const std::string& what)
        : DataError("no in-vocabulary words in " + what) {}
};

class NotPositiveDefinite : public NumericError {
public:
    NotPositiveDefinite()
        : NumericError("covariance is not positive definite; increase the ridge") {}
};

class BadContext : public NumericError {
public:
    BadContext() : NumericError("Mahalanobis context is not symmetric positive definite") {}
};

}  // namespace semspace
