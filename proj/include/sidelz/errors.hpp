#pragma once

#include <stdexcept>
#include <string>

namespace sidelz {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value outside the domain of a code or a width contract (e.g. h_k(n) with n > 2^k).
class DomainError : public Error {
public:
    using Error::Error;
};

// Caller-supplied data is unusable: length mismatch, alphabet violation, bad parameters.
class InputError : public Error {
public:
    using Error::Error;
};

class TruncatedStream : public Error {
public:
    using Error::Error;
};

class CorruptStream : public Error {
public:
    using Error::Error;
};

// The container checksum does not bind to this payload and side information.
class ChecksumMismatch : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace sidelz
