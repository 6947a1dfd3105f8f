#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace didrand {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A (group, period) cell has no observations, so the DiD is undefined.
class EmptyCellError : public Error {
public:
    EmptyCellError(int group, int period);
    int group() const noexcept { return group_; }
    int period() const noexcept { return period_; }

private:
    int group_;
    int period_;
};

/// The Monte Carlo retry cap was exhausted for one iteration.
class TooManyDegenerateDrawsError : public Error {
public:
    TooManyDegenerateDrawsError(std::size_t iteration, std::size_t attempts);
    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// The relabeling space exceeds the enumeration cap.
class SpaceTooLargeError : public Error {
public:
    SpaceTooLargeError(double log_size, double cap);
    double log_size() const noexcept { return log_size_; }

private:
    double log_size_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Invalid sample or configuration.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

class EmptyFileError : public Error {
public:
    explicit EmptyFileError(const std::string& path);
};

/// A CSV data row failed validation. `row()` is 1-based over data rows.
class MalformedRowError : public Error {
public:
    MalformedRowError(std::size_t row, const std::string& reason);
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace didrand
