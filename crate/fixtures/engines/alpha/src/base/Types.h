#pragma once
#include <stdint.h>
#include <cstddef>

// Types
