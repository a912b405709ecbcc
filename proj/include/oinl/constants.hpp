#pragma once

#include <numbers>

namespace oinl {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 reduced Planck constant, J s.
inline constexpr double hbar = 1.054571817e-34;

// Unit multipliers to SI.
namespace units {
inline constexpr double m = 1.0;
inline constexpr double mm = 1e-3;
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;
inline constexpr double s = 1.0;
inline constexpr double ms = 1e-3;
inline constexpr double us = 1e-6;
inline constexpr double ns = 1e-9;
}  // namespace units

}  // namespace oinl
