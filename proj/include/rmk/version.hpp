#ifndef RMK_VERSION_HPP
#define RMK_VERSION_HPP

namespace rmk {
inline constexpr const char* tool_name = "rmcheck";
inline constexpr const char* tool_version = "0.1.0";
}

#endif
