#pragma once
#include "core/object.h"

// input
