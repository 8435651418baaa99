#include "editor_node.h"
#include "scene/animation/animation_player.h"
#include "scene/resources/texture.h"
#include "core/input/input.h"
#include "thirdparty/sdk/sdk_api.h"

// editor_node
