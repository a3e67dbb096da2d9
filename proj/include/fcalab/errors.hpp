#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fcalab {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

class SingularMatrixError : public Error
{
public:
    using Error::Error;
};

class RangeError : public Error
{
public:
    using Error::Error;
};

class DegenerateKeyError : public Error
{
public:
    using Error::Error;
};

class InsufficientLengthError : public Error
{
public:
    using Error::Error;
};

class SelectionError : public Error
{
public:
    using Error::Error;
};

// N_w + N_v vanished for every candidate threshold.
class UndefinedRatioError : public Error
{
public:
    using Error::Error;
};

class ParseError : public Error
{
public:
    using Error::Error;
};

// Carries every violated field, not just the first one found.
class ValidationError : public Error
{
public:
    explicit ValidationError(std::vector<std::string> issues);

    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

} // namespace fcalab
