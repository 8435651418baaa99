#include "editor/editor_node.h"
#include "scene/animation/animation_player.h"

// anim_plugin
