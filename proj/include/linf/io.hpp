// JSON input schema and report emission.
#pragma once

#include <linf/cech.hpp>

namespace linf {
// implemented in a later commit of this build
}
