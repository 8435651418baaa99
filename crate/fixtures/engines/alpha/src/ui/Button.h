#pragma once
#include "2d/Sprite.h"

// Button
