#pragma once

#include <stdexcept>
#include <string>

namespace huap {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad encoding, dimension mismatch, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// Protocol ordering or state violations (consumed offline ciphertext,
// stale epoch, unknown object, missing capability).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// An actor attempted an action that needs material its role does not hold
// (or has not yet received).
class CapabilityError : public ProtocolError {
 public:
  using ProtocolError::ProtocolError;
};

// Authenticated payload decryption failed.
class AuthFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace huap
