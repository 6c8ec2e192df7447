#pragma once

namespace skewprod {

// Stamped into every serialized artifact; bump when output formats or
// canonical orders change, so cached results are not reused across formats.
inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace skewprod
