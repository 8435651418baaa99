#pragma once
#include <cstdint>

// typedefs
