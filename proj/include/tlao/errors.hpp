#pragma once

#include <stdexcept>
#include <string>

namespace tlao {

/// Invalid or inconsistent configuration (bad parameter, unknown key, ...).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integration lost its integrity: norm drift, symmetry drift, boundary breach.
class NumericalIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The low-energy subspace could not be split into one state per trap.
class BasisUnresolved : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tlao
