#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace iconoclasm {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A precondition of an operation was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// More symbols than a frequency table of the requested precision can hold.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// An observation (or latent transition) has probability zero under the model.
class ZeroLikelihood : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated or corrupted serialized data.
class FormatError : public Error {
 public:
  using Error::Error;
};

// A pop needed a tail word but the message tail was empty.
class TailUnderflow : public Error {
 public:
  explicit TailUnderflow(const std::string& what, std::size_t required_init_words = 0)
      : Error(what), required_init_words_(required_init_words) {}

  // Smallest init_words that lets the failing operation succeed; 0 if unknown.
  std::size_t required_init_words() const noexcept { return required_init_words_; }

 private:
  std::size_t required_init_words_;
};

}  // namespace iconoclasm
