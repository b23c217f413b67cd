#ifndef GNMF_ERRORS_HPP
#define GNMF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gnmf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension mismatch between operands; message names both shapes.
struct ShapeError : Error {
    using Error::Error;
};

// A value violates a domain constraint (e.g. negative matrix entry).
struct ValueError : Error {
    using Error::Error;
};

// Invalid solver or experiment configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Corpus/vocabulary construction failure.
struct PipelineError : Error {
    using Error::Error;
};

// Evaluation cannot be computed (e.g. single-class labels).
struct EvalError : Error {
    using Error::Error;
};

} // namespace gnmf

#endif
