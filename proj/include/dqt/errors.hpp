// errors.hpp — Exception types shared by every dqt module

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dqt {

// Bad input: non-Hermitian operators, out-of-range parameters, malformed configs.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A computation could not reach its stated accuracy or structure.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The rate graph has more than one closed communicating class, so the
// stationary distribution is not unique.
class ReducibleGeneratorError : public NumericalError {
public:
    ReducibleGeneratorError(const std::string& what, std::vector<std::vector<std::size_t>> blocks)
        : NumericalError(what), blocks_(std::move(blocks)) {}

    const std::vector<std::vector<std::size_t>>& blocks() const noexcept { return blocks_; }

private:
    std::vector<std::vector<std::size_t>> blocks_;
};

} // namespace dqt
