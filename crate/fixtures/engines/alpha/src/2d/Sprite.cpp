#include "Sprite.h"
#include "platform/Platform.h"

// Sprite
