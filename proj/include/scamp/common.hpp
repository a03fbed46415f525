#pragma once

#include <complex>
#include <string_view>

namespace scamp {

using Complex = std::complex<double>;

/// Detector record of a Geiger-mode detector.
enum class Outcome { no_click, click };

/// Cat-state parity: even cats hold only even photon numbers.
enum class Parity { even, odd };

inline Parity opposite(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }
inline double sign(Parity p) { return p == Parity::even ? 1.0 : -1.0; }
inline std::string_view to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

}  // namespace scamp
