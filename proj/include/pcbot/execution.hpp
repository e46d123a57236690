#pragma once

namespace pcbot {

/// Selects the OpenMP kernel or its serial reference. Both produce
/// bit-identical results; the serial path is kept for tests and benchmarks.
enum class Execution { Serial, Parallel };

}  // namespace pcbot
