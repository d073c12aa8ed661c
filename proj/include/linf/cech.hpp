// Nerves of finite covers, graded-window algebras, diagram modules, the
// Cech-style cofibrant replacement and derived (endo)morphisms.
#pragma once

#include <linf/equivariant.hpp>

namespace linf {
// implemented in a later commit of this build
}
