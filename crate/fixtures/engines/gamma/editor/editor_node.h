#pragma once
#include "core/object.h"

// editor_node
