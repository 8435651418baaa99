#pragma once
#include "core/object.h"
#include "servers/rendering/rendering_server.h"

// texture
