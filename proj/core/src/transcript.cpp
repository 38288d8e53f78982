#include "commlab/transcript.hpp"

namespace commlab {}
