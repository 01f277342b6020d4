#pragma once

namespace paclab {

/// Execution policy for data-parallel kernels. Every kernel that accepts an
/// Exec has a serial path that produces bit-identical results to the OpenMP
/// path; the serial path is the reference the tests compare against.
enum class Exec { Serial, OpenMP };

}  // namespace paclab
