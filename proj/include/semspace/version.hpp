#pragma once

namespace semspace {

inline constexpr const char* kToolVersion = "0.1.0";

// Version of the binary space file layout (docs/space_format.md).
inline constexpr unsigned kSpaceFormatVersion = 1;

// Version stamped into every --json CLI payload and build report.
inline constexpr unsigned kJsonSchemaVersion = 1;

}  // namespace semspace
