#pragma once
#include "Object.h"

// Context
