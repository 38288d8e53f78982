#include "commlab/sparse.hpp"

namespace commlab {}
