#pragma once
#include "core/object.h"
#include "scene/main/node.h"

// animation
