#pragma once
#include "core/typedefs.h"

// object
