#pragma once

namespace fairspace {

// Heavy kernels come in an OpenMP-parallel flavor and a serial reference
// flavor; tests assert they agree and the bench target compares them.
enum class ExecPolicy { serial, parallel };

}  // namespace fairspace
