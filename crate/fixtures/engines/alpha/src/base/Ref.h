#pragma once
#include "Types.h"

// Ref
