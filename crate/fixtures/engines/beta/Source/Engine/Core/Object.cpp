#include "Object.h"
#include "Profiler.h"

// Object
