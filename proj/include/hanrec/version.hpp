#pragma once

namespace hanrec {

inline constexpr const char* kEngineVersion = "hanrec-0.1.0";

}  // namespace hanrec
