#pragma once

#include <stdexcept>
#include <string>

namespace semtext {

// Base class for every error the library raises. Messages are
// module-qualified ("dom: ...", "model: ...") so the CLI can surface
// one-line diagnostics.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// dom
struct EncodingError : Error { using Error::Error; };
struct EmptyDocumentError : Error { using Error::Error; };

// embedding
struct FormatError : Error { using Error::Error; };
struct DimensionError : Error { using Error::Error; };

// encoder / labeler
struct ShapeError : Error { using Error::Error; };
struct LengthMismatchError : Error { using Error::Error; };

// trainer
struct EmptyCorpusError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct VersionError : Error { using Error::Error; };
struct ChecksumError : Error { using Error::Error; };

// plumbing
struct IoError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

}  // namespace semtext
