#include "Renderer.h"
#include "platform/Platform.h"
#include <GL/gl.h>

// Renderer
