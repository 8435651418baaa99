#pragma once
#include "Vec3.h"

// Mat4
