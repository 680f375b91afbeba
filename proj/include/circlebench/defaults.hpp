#pragma once

#include <cstdint>

// Every numeric default of the workbench lives here. Reports echo the values
// actually used, so changing a default never changes output silently.
namespace circlebench::defaults {

inline constexpr double solver_tolerance = 1e-13;  // absolute, in x
inline constexpr int max_solver_iterations = 400;

inline constexpr double min_cut_gap = 1e-9;
inline constexpr int validation_grid = 4096;
inline constexpr double validation_tolerance = 1e-12;

inline constexpr int depth_cap = 60;             // longest word handled
inline constexpr std::uint64_t cell_cap = 1u << 20;  // d^n cylinders per level
inline constexpr double work_cap = 1e7;          // tail-sum block enumeration

inline constexpr int conjugacy_depth_cap = 48;
inline constexpr int conjugacy_probe_level = 6;
inline constexpr double conjugacy_tolerance = 1e-8;

inline constexpr double ratio_floor = 1e-300;
inline constexpr int modulus_grid = 1024;
inline constexpr int modulus_max_dyadic_exponent = 20;  // t = 2^-j, j = 1..20

inline constexpr int tail_sum_geometry_level = 10;

}  // namespace circlebench::defaults
