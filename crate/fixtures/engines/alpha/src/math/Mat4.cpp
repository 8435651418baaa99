#include "Mat4.h"
#include "platform/Platform.h"
#include <cmath>

// Mat4
