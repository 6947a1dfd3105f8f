#include "didrand/errors.hpp"

#include <sstream>

namespace didrand {

namespace {

std::string cell_message(int group, int period) {
    std::ostringstream os;
    os << "empty cell (affected=" << group << ", time=" << period << "): DiD is not estimable";
    return os.str();
}

std::string degenerate_message(std::size_t iteration, std::size_t attempts) {
    std::ostringstream os;
    os << "iteration " << iteration << ": " << attempts
       << " consecutive relabelings left a cell empty; sample is too small or imbalanced";
    return os.str();
}

std::string space_message(double log_size, double cap) {
    std::ostringstream os;
    os << "relabeling space too large to enumerate: log|Omega| = " << log_size << " exceeds log(cap) = "
       << cap << "; use Monte Carlo simulation instead";
    return os.str();
}

std::string row_message(std::size_t row, const std::string& reason) {
    std::ostringstream os;
    os << "malformed row " << row << ": " << reason;
    return os.str();
}

} // namespace

EmptyCellError::EmptyCellError(int group, int period)
    : Error(cell_message(group, period)), group_(group), period_(period) {}

TooManyDegenerateDrawsError::TooManyDegenerateDrawsError(std::size_t iteration, std::size_t attempts)
    : Error(degenerate_message(iteration, attempts)), iteration_(iteration) {}

SpaceTooLargeError::SpaceTooLargeError(double log_size, double cap)
    : Error(space_message(log_size, cap)), log_size_(log_size) {}

EmptyFileError::EmptyFileError(const std::string& path) : Error("empty input file: " + path) {}

MalformedRowError::MalformedRowError(std::size_t row, const std::string& reason)
    : Error(row_message(row, reason)), row_(row) {}

} // namespace didrand
