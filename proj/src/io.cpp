#include <linf/io.hpp>
