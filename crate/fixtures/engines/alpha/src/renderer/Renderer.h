#pragma once
#include "math/Mat4.h"
#include "base/Ref.h"

// Renderer
