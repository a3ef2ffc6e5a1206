#pragma once

namespace seqweight {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace seqweight
