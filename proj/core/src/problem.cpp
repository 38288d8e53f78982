#include "commlab/problem.hpp"

namespace commlab {}
