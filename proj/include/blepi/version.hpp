#pragma once

namespace blepi {

inline constexpr const char* kArtifactName = "blepi";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace blepi
