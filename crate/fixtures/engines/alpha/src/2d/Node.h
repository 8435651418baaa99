#pragma once
#include "base/Ref.h"
#include "math/Mat4.h"

// Node
