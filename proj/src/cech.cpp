#include <linf/cech.hpp>
