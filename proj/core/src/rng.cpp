#include "commlab/rng.hpp"

// Header-only; this TU anchors the target.
namespace commlab {}
