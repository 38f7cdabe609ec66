#pragma once

#include <filesystem>

#include "ssn/field.hpp"

namespace ssn::field {

/// Writes the versioned instance JSON:
/// {version, n, seed, density, sigma_min, A: [[i,j,v],...] row-major, b, p_star}.
/// Serialization is deterministic and numeric values round-trip bit-exactly.
void write_instance(const AvvfInstance& inst, const std::filesystem::path& path);

/// Parses an instance file. Throws ParseError on malformed input.
AvvfInstance read_instance(const std::filesystem::path& path);

} // namespace ssn::field
