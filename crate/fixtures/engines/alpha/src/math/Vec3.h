#pragma once
#include "base/Types.h"

// Vec3
