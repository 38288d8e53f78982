#include "commlab/qcost.hpp"

namespace commlab {}
