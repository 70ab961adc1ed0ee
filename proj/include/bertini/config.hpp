#pragma once

#include <cstdint>

namespace bertini::config {

// Process-wide resource guards. Defaults can be overridden through the
// environment (BERTINI_MAX_FIELD_BITS, BERTINI_MAX_SCAN_POINTS) or set
// programmatically before any work starts.

/// Largest working field accepted, as log2 of its size. Default 20.
unsigned max_field_bits();
void set_max_field_bits(unsigned bits);

/// Largest number of projective points a single extension-degree scan may visit. Default 2^22.
std::uint64_t max_scan_points();
void set_max_scan_points(std::uint64_t points);

/// Largest |S_d| enumerated in exhaustive mode. Default 2^24.
std::uint64_t exhaustive_budget();
void set_exhaustive_budget(std::uint64_t forms);

}  // namespace bertini::config
