#pragma once
#include "Node.h"
#include "resources/Texture.h"

// Sprite
