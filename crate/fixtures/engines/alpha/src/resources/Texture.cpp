#include "Texture.h"
#include "renderer/Renderer.h"
#include "platform/Platform.h"

// Texture
