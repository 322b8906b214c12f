#pragma once

namespace bvpp {

inline constexpr const char* kToolkitVersion = "0.1.0";

}  // namespace bvpp
