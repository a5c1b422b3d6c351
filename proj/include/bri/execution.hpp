#pragma once

namespace bri {

/// Selects between the plain loop kept as reference and the OpenMP kernel.
/// Both produce bitwise identical results; only scheduling differs.
enum class Execution { Serial, Parallel };

} // namespace bri
