#pragma once
#include "scene/resources/animation.h"
#include "core/object.h"

// animation_player
