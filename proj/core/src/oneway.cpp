#include "commlab/oneway.hpp"

namespace commlab {}
