#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

namespace molsec {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class LengthMismatchError : public Error {
public:
    using Error::Error;
};

// Kept-slot bits of A and C must differ at every position.
class SiftViolationError : public Error {
public:
    using Error::Error;
};

// Stream length is not a positive multiple of the 8-bit block size.
class BlockAlignmentError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    IoError(const std::filesystem::path& path, const std::string& what)
        : Error(what + ": " + path.string()), path_(path) {}

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace molsec
