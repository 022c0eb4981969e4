#pragma once

#include <stdexcept>
#include <string>

namespace streamcode {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FieldMismatch : public Error { public: using Error::Error; };
class ZeroInverse : public Error { public: using Error::Error; };
class DuplicateAbscissa : public Error { public: using Error::Error; };
class LengthMismatch : public Error { public: using Error::Error; };
class InvalidArgument : public Error { public: using Error::Error; };
class SpaceTooLarge : public Error { public: using Error::Error; };
class SearchExhausted : public Error { public: using Error::Error; };
class EndOfStream : public Error { public: using Error::Error; };
class OutOfOrderWrite : public Error { public: using Error::Error; };
class AdviceMismatch : public Error { public: using Error::Error; };
class ResampleExhausted : public Error { public: using Error::Error; };
class FormatError : public Error { public: using Error::Error; };
class ProfileError : public Error { public: using Error::Error; };
class StreamExhausted : public Error { public: using Error::Error; };

}  // namespace streamcode
