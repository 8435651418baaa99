#pragma once
#include <stdint.h>

// Platform
