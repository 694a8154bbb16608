#pragma once

#include <stdexcept>
#include <string>

namespace fractrunc {

// Every failure the library reports derives from Error so callers (the CLI in
// particular) can map families of failures onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class NonIntegrable : public Error {
public:
    using Error::Error;
};

class NonCancelling : public Error {
public:
    using Error::Error;
};

class BracketFailure : public Error {
public:
    using Error::Error;
};

class GrowthViolation : public Error {
public:
    using Error::Error;
};

class HypothesisViolation : public Error {
public:
    using Error::Error;
};

class InvariantViolation : public Error {
public:
    using Error::Error;
};

class ExponentOutOfRange : public Error {
public:
    ExponentOutOfRange(const std::string& what, double threshold)
        : Error(what), threshold_(threshold) {}
    double threshold() const noexcept { return threshold_; }

private:
    double threshold_;
};

class GeometryViolation : public Error {
public:
    using Error::Error;
};

// Raised by constructions that need γ̄ when it does not exist; the root
// finder itself reports absence through an empty optional.
class NoRoot : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

}  // namespace fractrunc
