#ifndef RMK_RINGQUERY_HPP
#define RMK_RINGQUERY_HPP

#include <string>
#include <string_view>

// Named characteristic-class queries rendered in the textual polynomial
// grammar; backs the `ring` command.

namespace rmk {

std::string ring_dual(int k, long l);
std::string ring_euler_rattray(int k, long m, bool doubled);
std::string ring_euler_makeev(int k, int l, long m, bool orth);
// components: "r2-total", "plane-total", "euler" (needs m), "dual" (needs l)
std::string ring_d8(std::string_view component, long m, long l);
// components: "total", "euler", "test" (need m), "dual" (needs l)
std::string ring_w3(std::string_view component, long m, long l);

}  // namespace rmk

#endif
