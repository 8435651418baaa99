#include "Node.h"
#include "renderer/Renderer.h"

// Node
