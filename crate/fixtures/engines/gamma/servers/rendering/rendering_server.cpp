#include "rendering_server.h"
#include <vulkan/vulkan.h>

// rendering_server
