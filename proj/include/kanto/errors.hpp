#pragma once

#include <stdexcept>
#include <string>

namespace kanto {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct HermiticityError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };
struct HypothesisError : Error { using Error::Error; };
struct DegenerateExponentError : Error { using Error::Error; };
struct ParameterError : Error { using Error::Error; };
struct GenerationError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace kanto
