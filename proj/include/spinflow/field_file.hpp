#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinflow/spinor_field.hpp"

namespace spinflow {

/**
 * FieldFile binary layout (all integers and floats little-endian):
 *
 *   offset  size  content
 *   0       5     magic "SPNF1"
 *   5       1     endianness tag 'L'
 *   6       1     domain (0 torus, 1 disk, 2 sphere chart)
 *   7       1     spin structure (0 PP, 1 PA, 2 AP, 3 AA; 255 none)
 *   8       12    u32 nx, ny, n
 *   20      16    f64 param_a, param_b (torus periods; disk radius and 0; sphere 0, 0)
 *   36      16    f64 origin_x, origin_y (torus only, 0 otherwise)
 *   52      4     u32 tag length L
 *   56      L     tag bytes
 *   56 + L        payload: nx * ny * 2n complex values as (re, im) f64 pairs,
 *                 node-major then component-major, i.e. the in-memory order
 *                 node * 2n + 2c + s.
 */
std::vector<std::uint8_t> encode_field(const SpinorField& psi);
SpinorField decode_field(const std::vector<std::uint8_t>& bytes);

/// Throws IoError when the file cannot be written.
void write_field(const SpinorField& psi, const std::string& path);
/// Throws IoError when the file cannot be read, FormatError on a malformed file.
SpinorField read_field(const std::string& path);

std::vector<std::uint8_t> read_bytes(const std::string& path);
void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

}  // namespace spinflow
