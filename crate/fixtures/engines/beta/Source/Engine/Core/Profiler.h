#pragma once
#include "Object.h"

// Profiler
