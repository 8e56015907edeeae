#ifndef PRIMEIFS_ERROR_HPP
#define PRIMEIFS_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primeifs {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class InvalidQueryError : public Error {
public:
    using Error::Error;
};

class InvalidModulusError : public Error {
public:
    using Error::Error;
};

class UnmappedResidueError : public Error {
public:
    UnmappedResidueError(std::uint64_t value, std::uint64_t modulus)
        : Error("value " + std::to_string(value) + " has residue " +
                std::to_string(value % modulus) + " mod " + std::to_string(modulus) +
                " outside the alphabet"),
          value_(value) {}

    std::uint64_t value() const noexcept { return value_; }

private:
    std::uint64_t value_;
};

class ShortStreamError : public Error {
public:
    using Error::Error;
};

class SymbolOutOfRangeError : public Error {
public:
    using Error::Error;
};

class OutOfUnitSquareError : public Error {
public:
    using Error::Error;
};

class UnsupportedMapError : public Error {
public:
    using Error::Error;
};

class DegenerateTableError : public Error {
public:
    using Error::Error;
};

} // namespace primeifs

#endif // PRIMEIFS_ERROR_HPP
