#include "commlab/elias.hpp"

namespace commlab {}
