#pragma once

namespace beliefbank {

inline constexpr const char* kArtifactVersion = "0.1.0";

}  // namespace beliefbank
