#pragma once
#include "core/object.h"

// node
